#ifndef BEQUIV_SPECIALFN_HPP
#define BEQUIV_SPECIALFN_HPP

#include "bequiv/errors.hpp"

namespace bequiv {

/// Controls the adaptive quadrature used for owens_q.
struct QuadratureSpec {
    double rel_tolerance = 1e-10;
    double abs_tolerance = 1e-12;
    int max_subdivisions = 1024;

    void validate() const;
};

/// P(Z <= x) for standard normal Z.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

/// Inverse of the standard error function on (-1, 1).
double inverse_erf(double y);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Exposed because the t distribution and its tests both use it.
double incomplete_beta(double a, double b, double x);

/// P(T <= x) for Student's t with df degrees of freedom (df > 0, real).
double student_t_cdf(double x, double df);

/// Density of Student's t with df degrees of freedom.
double student_t_pdf(double x, double df);

/// Inverse of student_t_cdf in x for fixed df.
double student_t_quantile(double p, double df);

/// Quantile of the lognormal distribution with log-scale mean mu and SD
/// sigma: exp(sigma*sqrt(2)*inverse_erf(2p-1) + mu).
double lognormal_quantile(double p, double mu, double sigma);

/// Owen's Q function
///   Q_v(t, delta; a, b) =
///     sqrt(2*pi) / (Gamma(v/2) * 2^((v-2)/2))
///       * integral_a^b Phi(t*x/sqrt(v) - delta) * x^(v-1) * phi(x) dx
/// evaluated by adaptive Gauss-Kronrod quadrature. The weight is the chi
/// density with v degrees of freedom, so the result lies in [0, 1].
double owens_q(double v, double t, double delta, double a, double b,
               const QuadratureSpec& quad = QuadratureSpec{});

} // namespace bequiv

#endif
