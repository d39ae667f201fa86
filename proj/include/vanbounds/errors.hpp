#pragma once

#include <stdexcept>
#include <string>

namespace vanbounds {

/// Malformed or out-of-contract input (bad dimensions, non-finite values,
/// options that cannot be satisfied). Maps to CLI exit code 2.
class invalid_input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two characteristic roots coincide at the active tolerance, so a quantity
/// with a root-gap denominator is undefined. Carries the offending pair.
class root_collision_error : public std::domain_error {
public:
    root_collision_error(int index_a, int index_b, double root_a, double root_b)
        : std::domain_error("root collision between lambda[" + std::to_string(index_a) +
                            "]=" + std::to_string(root_a) + " and lambda[" +
                            std::to_string(index_b) + "]=" + std::to_string(root_b)),
          index_a_(index_a), index_b_(index_b), root_a_(root_a), root_b_(root_b) {}

    int index_a() const noexcept { return index_a_; }
    int index_b() const noexcept { return index_b_; }
    double root_a() const noexcept { return root_a_; }
    double root_b() const noexcept { return root_b_; }

private:
    int index_a_;
    int index_b_;
    double root_a_;
    double root_b_;
};

/// A numerical procedure failed to meet its certificate (solver residual,
/// indefinite matrix where SPD is required). Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vanbounds
