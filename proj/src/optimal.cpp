#include "bequiv/optimal.hpp"

#include "bequiv/errors.hpp"
#include "bequiv/specialfn.hpp"

#include <cmath>
#include <stdexcept>

namespace bequiv {

void UmpSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("UmpSpec: alpha must be in (0, 1)");
    }
    if (!(theta > 0.0)) {
        throw std::domain_error("UmpSpec: theta must be positive");
    }
    if (!(sigma > 0.0)) {
        throw std::domain_error("UmpSpec: sigma must be positive");
    }
    if (n < 1) {
        throw std::domain_error("UmpSpec: n must be >= 1");
    }
}

double ump_psi(double alpha, double theta, double sigma) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("ump_psi: alpha must be in (0, 1)");
    }
    if (theta < 0.0 || !(sigma > 0.0)) {
        throw std::domain_error("ump_psi: require theta >= 0, sigma > 0");
    }
    auto objective = [&](double psi) {
        return std_normal_cdf((psi - theta) / sigma) -
               std_normal_cdf((-psi - theta) / sigma) - alpha;
    };
    // Monotone in psi, 0 at psi = 0, -> 1-alpha as psi -> inf; guaranteed
    // bracket per the quantile bound.
    double lo = 0.0;
    double hi = sigma * std_normal_quantile(0.5 * (1.0 + alpha)) + theta + 10.0 * sigma;
    while (objective(hi) < 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (objective(mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool ump_decide(double xbar, const UmpSpec& spec) {
    spec.validate();
    double root_n = std::sqrt(static_cast<double>(spec.n));
    return root_n * std::fabs(xbar) <=
           ump_psi(spec.alpha, root_n * spec.theta, spec.sigma);
}

double ump_exact_power(double mu, const UmpSpec& spec) {
    spec.validate();
    double root_n = std::sqrt(static_cast<double>(spec.n));
    double psi = ump_psi(spec.alpha, root_n * spec.theta, spec.sigma);
    // sqrt(n)*Xbar ~ N(sqrt(n)*mu, sigma^2)
    double m = root_n * mu;
    return std_normal_cdf((psi - m) / spec.sigma) -
           std_normal_cdf((-psi - m) / spec.sigma);
}

double kv_tost_power(double mu_diff, int n_t, int n_r, double sigma,
                     double alpha, const BeLimits& limits) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("kv_tost_power: sigma must be positive");
    }
    if (n_t < 1 || n_r < 1) {
        throw std::domain_error("kv_tost_power: group sizes must be >= 1");
    }
    double s = sigma * std::sqrt(1.0 / n_t + 1.0 / n_r);
    double z = std_normal_quantile(1.0 - alpha);
    double lo = limits.theta_l + z * s;
    double hi = limits.theta_u - z * s;
    if (hi <= lo) {
        return 0.0;
    }
    return std_normal_cdf((hi - mu_diff) / s) - std_normal_cdf((lo - mu_diff) / s);
}

namespace {

// Inverts a strictly increasing cdf at fixed theta by expanding bracket
// plus bisection.
double cdf_quantile(const SamplingCdf& cdf, double theta, double p) {
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (cdf(lo, theta) > p) {
        lo = 2.0 * lo - 1.0;
        if (++guard > 200) throw numerical_error("two_cutoff_solver: cdf bracket failed", p);
    }
    guard = 0;
    while (cdf(hi, theta) < p) {
        hi = 2.0 * hi + 1.0;
        if (++guard > 200) throw numerical_error("two_cutoff_solver: cdf bracket failed", p);
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid, theta) < p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::pair<double, double> two_cutoff_solver(double alpha, double theta1,
                                            double theta2,
                                            const SamplingCdf& cdf) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("two_cutoff_solver: alpha must be in (0, 1)");
    }
    if (!(theta1 < theta2)) {
        throw std::domain_error("two_cutoff_solver: require theta1 < theta2");
    }

    // Given c1, the inner solve pins c2 so P_theta1(c1 < Y < c2) = alpha;
    // under MLR the residual at theta2 is monotone increasing in c1, so an
    // outer bisection closes the system.
    auto upper_cutoff = [&](double c1) {
        return cdf_quantile(cdf, theta1, cdf(c1, theta1) + alpha);
    };
    auto residual = [&](double c1) {
        return cdf(upper_cutoff(c1), theta2) - cdf(c1, theta2) - alpha;
    };

    const double eps = 1e-12;
    double lo = cdf_quantile(cdf, theta1, eps);
    double hi = cdf_quantile(cdf, theta1, 1.0 - alpha - eps);
    double rlo = residual(lo);
    double rhi = residual(hi);
    if (rlo > 0.0 || rhi < 0.0) {
        throw numerical_error("two_cutoff_solver: residual not bracketed",
                              std::fabs(rlo) + std::fabs(rhi));
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) lo = mid; else hi = mid;
    }
    double c1 = 0.5 * (lo + hi);
    double c2 = upper_cutoff(c1);

    double r1 = cdf(c2, theta1) - cdf(c1, theta1) - alpha;
    double r2 = cdf(c2, theta2) - cdf(c1, theta2) - alpha;
    if (std::fabs(r1) > 1e-8 || std::fabs(r2) > 1e-8) {
        throw numerical_error("two_cutoff_solver: residual above tolerance",
                              std::max(std::fabs(r1), std::fabs(r2)));
    }
    return {c1, c2};
}

} // namespace bequiv
