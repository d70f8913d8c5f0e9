#ifndef BEQUIV_POWER_HPP
#define BEQUIV_POWER_HPP

#include "bequiv/equivtest.hpp"
#include "bequiv/specialfn.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bequiv {

struct PowerParams {
    double mu_diff;  ///< log-scale mu_T - mu_R
    int n_t;
    int n_r;
    double sigma;    ///< log-scale SD, > 0
    double alpha;
    BeLimits limits = BeLimits::regulatory();
    QuadratureSpec quad = QuadratureSpec{};

    void validate() const;
};

/// Exact TOST power as a difference of two Owen's Q evaluations, clamped
/// to [0, 1].
double exact_power(const PowerParams& params);

struct SampleSizeResult {
    int n_t;
    int n_r;
    double achieved_power;
};

/// Smallest group sizes reaching target_power, scanning n_t upward with
/// n_r = max(2, round(allocation * n_t)). allocation is n_r : n_t.
/// Throws std::invalid_argument when mu_diff is on or outside the limits,
/// std::runtime_error when the scan cap is exceeded.
SampleSizeResult sample_size(double target_power, double mu_diff, double sigma,
                             double alpha,
                             const BeLimits& limits = BeLimits::regulatory(),
                             double allocation = 1.0, int cap = 100000);

/// exact_power over a grid of mu_diff values, rows in grid order.
std::vector<std::pair<double, double>> power_curve(
    const PowerParams& params, std::span<const double> grid);

} // namespace bequiv

#endif
