#include "bequiv/power.hpp"

#include "bequiv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bequiv {

void PowerParams::validate() const {
    if (!(sigma > 0.0)) {
        throw std::domain_error("PowerParams: sigma must be positive");
    }
    if (n_t < 2 || n_r < 2) {
        throw std::domain_error("PowerParams: group sizes must be >= 2");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::domain_error("PowerParams: alpha must be in (0, 0.5)");
    }
}

double exact_power(const PowerParams& params) {
    params.validate();
    const double r = static_cast<double>(params.n_t + params.n_r - 2);
    const double se_scale = std::sqrt(1.0 / params.n_t + 1.0 / params.n_r);
    const double tcrit = student_t_quantile(1.0 - params.alpha, r);
    const double scale = params.sigma * se_scale;
    const double delta_upper = (params.mu_diff - params.limits.theta_u) / scale;
    const double delta_lower = (params.mu_diff - params.limits.theta_l) / scale;
    const double b = (params.limits.theta_u - params.limits.theta_l) *
                     std::sqrt(r) / (2.0 * scale * tcrit);
    double power = owens_q(r, -tcrit, delta_upper, 0.0, b, params.quad) -
                   owens_q(r, tcrit, delta_lower, 0.0, b, params.quad);
    return std::clamp(power, 0.0, 1.0);
}

SampleSizeResult sample_size(double target_power, double mu_diff, double sigma,
                             double alpha, const BeLimits& limits,
                             double allocation, int cap) {
    if (!(target_power > 0.0 && target_power < 1.0)) {
        throw std::domain_error("sample_size: target_power must be in (0, 1)");
    }
    if (!(allocation > 0.0)) {
        throw std::domain_error("sample_size: allocation must be positive");
    }
    if (!(mu_diff > limits.theta_l && mu_diff < limits.theta_u)) {
        throw infeasible_error(
            "sample_size: mu_diff must lie strictly inside the equivalence limits");
    }
    for (int n_t = 2; n_t <= cap; ++n_t) {
        int n_r = std::max(2, static_cast<int>(std::lround(allocation * n_t)));
        if (n_r > cap) break;
        PowerParams p{mu_diff, n_t, n_r, sigma, alpha, limits};
        double pw = exact_power(p);
        if (pw >= target_power) {
            return SampleSizeResult{n_t, n_r, pw};
        }
    }
    throw infeasible_error("sample_size: no feasible size within the cap");
}

std::vector<std::pair<double, double>> power_curve(
    const PowerParams& params, std::span<const double> grid) {
    if (grid.empty()) {
        throw std::domain_error("power_curve: grid must be nonempty");
    }
    std::vector<std::pair<double, double>> rows;
    rows.reserve(grid.size());
    for (double mu : grid) {
        PowerParams p = params;
        p.mu_diff = mu;
        rows.emplace_back(mu, exact_power(p));
    }
    return rows;
}

} // namespace bequiv
