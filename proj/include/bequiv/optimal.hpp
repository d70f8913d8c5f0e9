#ifndef BEQUIV_OPTIMAL_HPP
#define BEQUIV_OPTIMAL_HPP

#include "bequiv/equivtest.hpp"

#include <functional>
#include <utility>

namespace bequiv {

/// Known-variance UMP equivalence test: H0 |mu| >= theta vs Ha |mu| < theta.
struct UmpSpec {
    double alpha;
    double theta; ///< equivalence half-width, > 0
    double sigma; ///< known SD, > 0
    int n;

    void validate() const;
};

/// Unique root psi >= 0 of Phi((psi-theta)/sigma) - Phi((-psi-theta)/sigma)
/// = alpha. The left side is strictly increasing in psi from 0 to 1.
double ump_psi(double alpha, double theta, double sigma);

/// Reject H0 (declare equivalence) iff sqrt(n)*|xbar| <= psi(alpha,
/// sqrt(n)*theta, sigma). The boundary is inclusive.
bool ump_decide(double xbar, const UmpSpec& spec);

/// P(reject) at true mean mu, in closed form with the normal cdf.
double ump_exact_power(double mu, const UmpSpec& spec);

/// Known-variance TOST benchmark: P(theta_l + z*s < Xbar_diff < theta_u -
/// z*s) with s = sigma*sqrt(1/n_t + 1/n_r); 0 when the window is empty.
double kv_tost_power(double mu_diff, int n_t, int n_r, double sigma,
                     double alpha, const BeLimits& limits);

/// CDF of the sufficient statistic Y under a given parameter value.
using SamplingCdf = std::function<double(double y, double theta)>;

/// Two-cutoff UMP solver for a continuous one-parameter exponential family:
/// finds c1 < c2 with P_theta1(c1 < Y < c2) = P_theta2(c1 < Y < c2) = alpha.
/// The cdf must be continuous and strictly increasing in y and
/// stochastically increasing in theta.
std::pair<double, double> two_cutoff_solver(double alpha, double theta1,
                                            double theta2,
                                            const SamplingCdf& cdf);

} // namespace bequiv

#endif
