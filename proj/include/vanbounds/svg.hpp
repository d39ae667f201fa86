#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/ellipsoid.hpp"
#include "vanbounds/errors.hpp"
#include "vanbounds/format.hpp"

namespace vanbounds::svg {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::array<double, 2>> points;
};

struct PlotOptions {
    int width = 640;
    int height = 420;
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
};

namespace detail {

inline std::string escape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void absorb(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    bool valid() const { return lo <= hi; }

    void pad(double fraction) {
        const double span = hi - lo;
        if (span <= 0.0) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            lo -= fraction * span;
            hi += fraction * span;
        }
    }
};

inline double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double ratio = raw / mag;
    if (ratio >= 5.0) return 5.0 * mag;
    if (ratio >= 2.0) return 2.0 * mag;
    return mag;
}

inline std::string tag_open(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_integer(width) +
           "\" height=\"" + format_integer(height) + "\" viewBox=\"0 0 " +
           format_integer(width) + " " + format_integer(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

inline std::string line(double x1, double y1, double x2, double y2, const std::string& stroke,
                        double width) {
    return "<line x1=\"" + format_fixed(x1, 2) + "\" y1=\"" + format_fixed(y1, 2) + "\" x2=\"" +
           format_fixed(x2, 2) + "\" y2=\"" + format_fixed(y2, 2) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + format_fixed(width, 2) + "\"/>\n";
}

inline std::string text(double x, double y, const std::string& content, const std::string& anchor,
                        const std::string& extra = "") {
    return "<text x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(y, 2) +
           "\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape_text(content) + "</text>\n";
}

inline std::string poly(const std::vector<std::array<double, 2>>& pts, bool closed,
                        const std::string& stroke, double width, const std::string& fill) {
    std::string out = closed ? "<polygon points=\"" : "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) out += ' ';
        out += format_fixed(pts[i][0], 2) + "," + format_fixed(pts[i][1], 2);
    }
    out += "\" stroke=\"" + stroke + "\" stroke-width=\"" + format_fixed(width, 2) + "\" fill=\"" +
           fill + "\"/>\n";
    return out;
}

}  // namespace detail

/// Multi-series line plot with linear or log-scale y axis. In log mode,
/// points with nonpositive y are dropped. Output is a complete standalone
/// SVG document string.
inline std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts) {
    if (series.empty()) throw invalid_input_error("plot needs at least one series");

    const double ml = 64.0;
    const double mr = 18.0;
    const double mt = opts.title.empty() ? 18.0 : 36.0;
    const double mb = 48.0;
    const double w = static_cast<double>(opts.width);
    const double h = static_cast<double>(opts.height);

    detail::Range xr;
    detail::Range yr;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
            if (opts.log_y && !(p[1] > 0.0)) continue;
            xr.absorb(p[0]);
            yr.absorb(opts.log_y ? std::log10(p[1]) : p[1]);
        }
    }
    if (!xr.valid() || !yr.valid()) throw invalid_input_error("plot has no drawable points");
    xr.pad(0.04);
    yr.pad(0.08);

    const auto map_x = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * (w - ml - mr); };
    const auto map_y = [&](double y) { return h - mb - (y - yr.lo) / (yr.hi - yr.lo) * (h - mt - mb); };

    std::string out = detail::tag_open(opts.width, opts.height);

    if (!opts.title.empty()) {
        out += detail::text(w / 2.0, 20.0, opts.title, "middle", " font-size=\"15\"");
    }

    // Ticks and grid.
    const double x_step = detail::nice_step(xr.hi - xr.lo, 5);
    for (double x = std::ceil(xr.lo / x_step) * x_step; x <= xr.hi + 1e-9 * x_step; x += x_step) {
        const double px = map_x(x);
        out += detail::line(px, mt, px, h - mb, "#dddddd", 1.0);
        out += detail::line(px, h - mb, px, h - mb + 5.0, "#333333", 1.0);
        out += detail::text(px, h - mb + 18.0, format_shortest(std::abs(x) < 1e-12 ? 0.0 : x),
                            "middle");
    }
    if (opts.log_y) {
        const int d_lo = static_cast<int>(std::ceil(yr.lo));
        const int d_hi = static_cast<int>(std::floor(yr.hi));
        for (int d = d_lo; d <= d_hi; ++d) {
            const double py = map_y(static_cast<double>(d));
            out += detail::line(ml, py, w - mr, py, "#dddddd", 1.0);
            out += detail::line(ml - 5.0, py, ml, py, "#333333", 1.0);
            out += detail::text(ml - 8.0, py + 4.0, "1e" + format_integer(d), "end");
        }
    } else {
        const double y_step = detail::nice_step(yr.hi - yr.lo, 5);
        for (double y = std::ceil(yr.lo / y_step) * y_step; y <= yr.hi + 1e-9 * y_step;
             y += y_step) {
            const double py = map_y(y);
            out += detail::line(ml, py, w - mr, py, "#dddddd", 1.0);
            out += detail::line(ml - 5.0, py, ml, py, "#333333", 1.0);
            out += detail::text(ml - 8.0, py + 4.0, format_shortest(std::abs(y) < 1e-12 ? 0.0 : y),
                                "end");
        }
    }

    // Axes.
    out += detail::line(ml, mt, ml, h - mb, "#333333", 1.5);
    out += detail::line(ml, h - mb, w - mr, h - mb, "#333333", 1.5);
    if (!opts.x_label.empty()) {
        out += detail::text((ml + w - mr) / 2.0, h - 10.0, opts.x_label, "middle");
    }
    if (!opts.y_label.empty()) {
        out += "<text x=\"16\" y=\"" + format_fixed((mt + h - mb) / 2.0, 2) +
               "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
               format_fixed((mt + h - mb) / 2.0, 2) + ")\">" + detail::escape_text(opts.y_label) +
               "</text>\n";
    }

    // Series.
    for (const auto& s : series) {
        std::vector<std::array<double, 2>> pts;
        pts.reserve(s.points.size());
        for (const auto& p : s.points) {
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
            if (opts.log_y && !(p[1] > 0.0)) continue;
            pts.push_back({map_x(p[0]), map_y(opts.log_y ? std::log10(p[1]) : p[1])});
        }
        if (pts.size() >= 2) {
            out += detail::poly(pts, false, s.color, 1.8, "none");
        }
        for (const auto& p : pts) {
            out += "<circle cx=\"" + format_fixed(p[0], 2) + "\" cy=\"" + format_fixed(p[1], 2) +
                   "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
        }
    }

    // Legend.
    double ly = mt + 14.0;
    for (const auto& s : series) {
        const double lx = w - mr - 150.0;
        out += detail::line(lx, ly - 4.0, lx + 22.0, ly - 4.0, s.color, 2.0);
        out += detail::text(lx + 28.0, ly, s.label, "start");
        ly += 17.0;
    }

    out += "</svg>\n";
    return out;
}

/// One drawable region or path of a 2D overlay, in data coordinates.
struct OverlayItem {
    std::string label;
    std::string color;
    bool closed = false;
    bool filled = false;
    std::vector<std::array<double, 2>> points;
};

inline OverlayItem polygon_item(const Eigen::MatrixXd& vertices, const std::string& label,
                                const std::string& color) {
    if (vertices.cols() != 2) throw invalid_input_error("overlay polygons must be 2D");
    OverlayItem item{label, color, true, true, {}};
    item.points.reserve(static_cast<std::size_t>(vertices.rows()));
    for (int i = 0; i < vertices.rows(); ++i) {
        item.points.push_back({vertices(i, 0), vertices(i, 1)});
    }
    return item;
}

inline OverlayItem ellipse_item(const Ellipsoid& e, const std::string& label,
                                const std::string& color, int segments = 128) {
    if (e.dim() != 2) throw invalid_input_error("overlay ellipses must be 2D");
    OverlayItem item{label, color, true, true, {}};
    const Eigen::MatrixXd sqrt_q = e.sqrt_shape();
    item.points.reserve(static_cast<std::size_t>(segments));
    for (int s = 0; s < segments; ++s) {
        const double th = 2.0 * M_PI * s / segments;
        Eigen::Vector2d u(std::cos(th), std::sin(th));
        const Eigen::Vector2d x = e.center() + e.radius() * (sqrt_q * u);
        item.points.push_back({x(0), x(1)});
    }
    return item;
}

inline OverlayItem path_item(const std::vector<std::array<double, 2>>& points,
                             const std::string& label, const std::string& color) {
    return OverlayItem{label, color, false, false, points};
}

/// Equal-aspect 2D overlay of bounds and trajectories. Filled items are drawn
/// translucent below the open paths.
inline std::string overlay_plot(const std::vector<OverlayItem>& items, const PlotOptions& opts) {
    if (items.empty()) throw invalid_input_error("overlay needs at least one item");

    detail::Range xr;
    detail::Range yr;
    for (const auto& item : items) {
        for (const auto& p : item.points) {
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
            xr.absorb(p[0]);
            yr.absorb(p[1]);
        }
    }
    if (!xr.valid() || !yr.valid()) throw invalid_input_error("overlay has no drawable points");
    xr.pad(0.08);
    yr.pad(0.08);

    const double mt = opts.title.empty() ? 16.0 : 34.0;
    const double m = 16.0;
    const double w = static_cast<double>(opts.width);
    const double h = static_cast<double>(opts.height);
    const double scale = std::min((w - 2.0 * m) / (xr.hi - xr.lo), (h - mt - m) / (yr.hi - yr.lo));
    const double cx = 0.5 * (xr.lo + xr.hi);
    const double cy = 0.5 * (yr.lo + yr.hi);

    const auto map_x = [&](double x) { return w / 2.0 + (x - cx) * scale; };
    const auto map_y = [&](double y) { return (h + mt) / 2.0 - (y - cy) * scale; };

    std::string out = detail::tag_open(opts.width, opts.height);
    if (!opts.title.empty()) {
        out += detail::text(w / 2.0, 20.0, opts.title, "middle", " font-size=\"15\"");
    }

    // Coordinate axes through the origin when visible.
    if (xr.lo < 0.0 && xr.hi > 0.0) {
        out += detail::line(map_x(0.0), map_y(yr.lo), map_x(0.0), map_y(yr.hi), "#cccccc", 1.0);
    }
    if (yr.lo < 0.0 && yr.hi > 0.0) {
        out += detail::line(map_x(xr.lo), map_y(0.0), map_x(xr.hi), map_y(0.0), "#cccccc", 1.0);
    }

    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& item : items) {
            if ((pass == 0) != item.filled) continue;
            std::vector<std::array<double, 2>> pts;
            pts.reserve(item.points.size());
            for (const auto& p : item.points) {
                if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
                pts.push_back({map_x(p[0]), map_y(p[1])});
            }
            if (pts.size() < 2) continue;
            if (item.filled) {
                std::string body = item.closed ? "<polygon points=\"" : "<polyline points=\"";
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    if (i > 0) body += ' ';
                    body += format_fixed(pts[i][0], 2) + "," + format_fixed(pts[i][1], 2);
                }
                body += "\" stroke=\"" + item.color + "\" stroke-width=\"1.60\" fill=\"" +
                        item.color + "\" fill-opacity=\"0.12\"/>\n";
                out += body;
            } else {
                out += detail::poly(pts, item.closed, item.color, 2.0, "none");
            }
        }
    }

    double ly = mt + 14.0;
    for (const auto& item : items) {
        if (item.label.empty()) continue;
        const double lx = m + 6.0;
        out += detail::line(lx, ly - 4.0, lx + 22.0, ly - 4.0, item.color, 2.0);
        out += detail::text(lx + 28.0, ly, item.label, "start");
        ly += 17.0;
    }

    out += "</svg>\n";
    return out;
}

}  // namespace vanbounds::svg
