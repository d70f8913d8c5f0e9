#include "bequiv/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace bequiv {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(name) + " must be finite");
    }
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tolerance > 0.0) || !(abs_tolerance > 0.0)) {
        throw std::domain_error("quadrature tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) {
        throw std::domain_error("max_subdivisions must be >= 1");
    }
}

double std_normal_cdf(double x) {
    require_finite(x, "x");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("std_normal_quantile: p must be in (0, 1)");
    }
    // Acklam's rational approximation, then Halley refinement through the cdf.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        double e = std_normal_cdf(x) - p;
        double u = e / std_normal_pdf(x);
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double inverse_erf(double y) {
    if (!(std::fabs(y) < 1.0)) {
        throw std::domain_error("inverse_erf: |y| must be < 1");
    }
    if (y == 0.0) {
        return 0.0;
    }
    // erf^-1(y) = Phi^-1((1+y)/2) / sqrt(2), polished once through std::erf.
    double x = std_normal_quantile(0.5 * (1.0 + y)) / kSqrt2;
    double e = std::erf(x) - y;
    double deriv = 1.1283791670955125739 * std::exp(-x * x); // d/dx erf
    if (deriv > 0.0) {
        x -= e / deriv;
    }
    return x;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // Lentz continued fraction for I_x(a, b); switch to the symmetric form
    // when x is past the distribution's bulk so the fraction converges fast.
    auto cont_frac = [](double aa, double bb, double xx) {
        const double eps = std::numeric_limits<double>::epsilon();
        const double fpmin = std::numeric_limits<double>::min() / eps;
        double qab = aa + bb;
        double qap = aa + 1.0;
        double qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::fabs(d) < fpmin) d = fpmin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            int m2 = 2 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < 10.0 * eps) break;
        }
        return h;
    };

    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * cont_frac(a, b, x) / a;
    }
    return 1.0 - front * cont_frac(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double df) {
    require_finite(x, "x");
    if (!(df > 0.0)) {
        throw std::domain_error("student_t_cdf: df must be positive");
    }
    if (x == 0.0) return 0.5;
    double t2 = x * x;
    double p = incomplete_beta(0.5 * df, 0.5, df / (df + t2));
    return x > 0.0 ? 1.0 - 0.5 * p : 0.5 * p;
}

double student_t_pdf(double x, double df) {
    double lognorm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                     0.5 * std::log(df * M_PI);
    return std::exp(lognorm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("student_t_quantile: p must be in (0, 1)");
    }
    if (!(df > 0.0)) {
        throw std::domain_error("student_t_quantile: df must be positive");
    }
    if (p == 0.5) return 0.0;

    // Bracket, then safeguarded Newton on the cdf.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, df) > p) lo *= 2.0;
    while (student_t_cdf(hi, df) < p) hi *= 2.0;
    double x = std_normal_quantile(p);
    if (x < lo || x > hi) x = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        double f = student_t_cdf(x, df) - p;
        if (std::fabs(f) < 1e-15) break;
        if (f > 0.0) hi = x; else lo = x;
        double fp = student_t_pdf(x, df);
        double step = fp > 0.0 ? f / fp : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x) break;
        x = xn;
    }
    return x;
}

double lognormal_quantile(double p, double mu, double sigma) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("lognormal_quantile: p must be in (0, 1)");
    }
    if (sigma < 0.0) {
        throw std::domain_error("lognormal_quantile: sigma must be >= 0");
    }
    if (p == 0.5 || sigma == 0.0) {
        return std::exp(mu);
    }
    return std::exp(sigma * kSqrt2 * inverse_erf(2.0 * p - 1.0) + mu);
}

namespace {

// 15-point Gauss-Kronrod rule on [-1, 1] with embedded 7-point Gauss rule.
const double kKronrodNodes[8] = {
    0.0,
    0.2077849550078984676006894,
    0.4058451513773971669066064,
    0.5860872354676911302941448,
    0.7415311855993944398638648,
    0.8648644233597690727897128,
    0.9491079123427585245261897,
    0.9914553711208126392068547};
const double kKronrodWeights[8] = {
    0.2094821410847278280129992,
    0.2044329400752988924141620,
    0.1903505780647854099132564,
    0.1690047266392679028265834,
    0.1406532597155259187451896,
    0.1047900103222501838398763,
    0.0630920926299785532907007,
    0.0229353220105292249637320};
const double kGaussWeights[4] = {
    0.4179591836734693877551020,
    0.3818300505051189449503698,
    0.2797053914892766679014678,
    0.1294849661688696932706114};

struct Segment {
    double a, b, integral, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod(const F& f, double a, double b) {
    double h = 0.5 * (b - a);
    double c = 0.5 * (a + b);
    double fc = f(c);
    double kron = kKronrodWeights[0] * fc;
    double gauss = kGaussWeights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double dx = h * kKronrodNodes[i];
        double fsum = f(c - dx) + f(c + dx);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 0) {
            gauss += kGaussWeights[i / 2] * fsum;
        }
    }
    kron *= h;
    gauss *= h;
    return Segment{a, b, kron, std::fabs(kron - gauss)};
}

} // namespace

double owens_q(double v, double t, double delta, double a, double b,
               const QuadratureSpec& quad) {
    quad.validate();
    require_finite(t, "t");
    require_finite(delta, "delta");
    require_finite(b, "b");
    if (!(v >= 1.0)) {
        throw std::domain_error("owens_q: v must be >= 1");
    }
    if (a < 0.0) {
        throw std::domain_error("owens_q: a must be >= 0");
    }
    if (a > b) {
        throw std::domain_error("owens_q: requires a <= b");
    }
    if (a == b) {
        return 0.0;
    }

    // Integrand: Phi(t*x/sqrt(v) - delta) times the chi_v density, computed
    // in log space so large v does not overflow x^(v-1).
    const double log_chi_norm = std::lgamma(0.5 * v) + (0.5 * v - 1.0) * std::log(2.0);
    const double sqrt_v = std::sqrt(v);
    auto integrand = [&](double x) {
        if (x <= 0.0) {
            if (v == 1.0) {
                return std_normal_cdf(-delta) * std::exp(-log_chi_norm);
            }
            return 0.0;
        }
        double log_density = (v - 1.0) * std::log(x) - 0.5 * x * x - log_chi_norm;
        return std_normal_cdf(t * x / sqrt_v - delta) * std::exp(log_density);
    };

    std::priority_queue<Segment> segments;
    Segment whole = gauss_kronrod(integrand, a, b);
    double total = whole.integral;
    double total_error = whole.error;
    segments.push(whole);
    int used = 1;
    while (total_error > std::max(quad.abs_tolerance,
                                  quad.rel_tolerance * std::fabs(total))) {
        if (used >= quad.max_subdivisions) {
            throw numerical_error("owens_q: quadrature failed to converge",
                                  total_error);
        }
        Segment worst = segments.top();
        segments.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod(integrand, worst.a, mid);
        Segment right = gauss_kronrod(integrand, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
        ++used;
    }
    return std::clamp(total, 0.0, 1.0);
}

} // namespace bequiv
