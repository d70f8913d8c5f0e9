#include "bequiv/equivtest.hpp"

#include "bequiv/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bequiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha, const char* where) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::domain_error(std::string(where) + ": alpha must be in (0, 0.5)");
    }
}

} // namespace

BeLimits BeLimits::regulatory() { return from_ratio(0.8, 1.25); }

BeLimits BeLimits::from_ratio(double delta_l, double delta_u) {
    if (!(delta_l > 0.0) || !(delta_l < delta_u)) {
        throw std::domain_error("BeLimits: require 0 < delta_l < delta_u");
    }
    return BeLimits{std::log(delta_l), std::log(delta_u)};
}

BeLimits BeLimits::from_log(double theta_l, double theta_u) {
    if (!(theta_l < theta_u)) {
        throw std::domain_error("BeLimits: require theta_l < theta_u");
    }
    return BeLimits{theta_l, theta_u};
}

double BeLimits::delta_l() const { return std::exp(theta_l); }
double BeLimits::delta_u() const { return std::exp(theta_u); }

bool BeLimits::symmetric(double tol) const {
    return std::fabs(theta_l + theta_u) <= tol;
}

TostOutcome tost(const GroupSummary& summary, const BeLimits& limits,
                 double alpha) {
    check_alpha(alpha, "tost");
    if (summary.se_diff < 0.0 || summary.df < 1.0) {
        throw std::domain_error("tost: summary requires se_diff >= 0, df >= 1");
    }

    TostOutcome out;
    out.critical = student_t_quantile(1.0 - alpha, summary.df);
    double diff = summary.mean_diff();

    if (summary.se_diff == 0.0) {
        // sigma -> 0 limit of the decision rule.
        out.degenerate = true;
        out.t_lower = diff > limits.theta_l ? kInf : (diff == limits.theta_l ? 0.0 : -kInf);
        out.t_upper = diff < limits.theta_u ? -kInf : (diff == limits.theta_u ? 0.0 : kInf);
        out.p_lower = diff > limits.theta_l ? 0.0 : 1.0;
        out.p_upper = diff < limits.theta_u ? 0.0 : 1.0;
        out.p_overall = std::max(out.p_lower, out.p_upper);
        out.reject = diff > limits.theta_l && diff < limits.theta_u;
        return out;
    }

    out.t_lower = (diff - limits.theta_l) / summary.se_diff;
    out.t_upper = (diff - limits.theta_u) / summary.se_diff;
    out.p_lower = 1.0 - student_t_cdf(out.t_lower, summary.df);
    out.p_upper = student_t_cdf(out.t_upper, summary.df);
    out.p_overall = std::max(out.p_lower, out.p_upper);
    out.reject = out.t_lower > out.critical && out.t_upper < -out.critical;
    return out;
}

Interval ci_two_sided(const GroupSummary& summary, double alpha1, double alpha2) {
    check_alpha(alpha1, "ci_two_sided");
    check_alpha(alpha2, "ci_two_sided");
    double diff = summary.mean_diff();
    if (summary.se_diff == 0.0) {
        return Interval{diff, diff};
    }
    double t1 = student_t_quantile(1.0 - alpha1, summary.df);
    double t2 = student_t_quantile(1.0 - alpha2, summary.df);
    return Interval{diff - t1 * summary.se_diff, diff + t2 * summary.se_diff};
}

Interval ci_min_max(const GroupSummary& summary, double alpha) {
    check_alpha(alpha, "ci_min_max");
    Interval raw = ci_two_sided(summary, alpha, alpha);
    return Interval{std::min(0.0, raw.lower), std::max(0.0, raw.upper)};
}

bool decide_by_ci(const Interval& interval, const BeLimits& limits) {
    return interval.lower > limits.theta_l && interval.upper < limits.theta_u;
}

Interval back_transform(const Interval& interval) {
    return Interval{std::exp(interval.lower), std::exp(interval.upper)};
}

} // namespace bequiv
