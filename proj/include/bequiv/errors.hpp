#ifndef BEQUIV_ERRORS_HPP
#define BEQUIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bequiv {

/// Raised when an iterative numerical routine fails to reach its target
/// tolerance. Carries the tolerance actually achieved so callers can decide
/// whether the partial result is usable.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double achieved_tolerance)
        : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

    double achieved_tolerance() const noexcept { return achieved_tolerance_; }

private:
    double achieved_tolerance_;
};

/// Input-data problem (bad CSV row, empty arm, non-positive value).
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested target cannot be met for any admissible input
/// (sample-size search outside the limits or past its cap).
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bequiv

#endif
