#ifndef BEQUIV_EQUIVTEST_HPP
#define BEQUIV_EQUIVTEST_HPP

#include "bequiv/pkdata.hpp"

namespace bequiv {

/// Equivalence bounds. Stored on the log scale; ratio-scale accessors derive.
struct BeLimits {
    double theta_l;
    double theta_u;

    /// Regulatory default: (0.8, 1.25) on the ratio scale.
    static BeLimits regulatory();

    /// From ratio-scale bounds 0 < lo < hi.
    static BeLimits from_ratio(double delta_l, double delta_u);

    /// From log-scale bounds theta_l < theta_u.
    static BeLimits from_log(double theta_l, double theta_u);

    double delta_l() const;
    double delta_u() const;

    /// theta_l = -theta_u up to rounding; the (1-2alpha) CI / size-alpha
    /// equivalence needs this.
    bool symmetric(double tol = 1e-12) const;
};

struct TostOutcome {
    double t_lower = 0.0;
    double t_upper = 0.0;
    double critical = 0.0;
    double p_lower = 1.0;
    double p_upper = 1.0;
    double p_overall = 1.0;
    bool reject = false;
    bool degenerate = false; ///< se_diff == 0; limiting decision rule applied
};

/// Log-scale interval; bounds may be +-infinity for one-sided forms.
struct Interval {
    double lower;
    double upper;
};

/// TOST at size alpha. With se_diff == 0 the limiting rule applies:
/// reject iff theta_l < mean_diff < theta_u, flagged degenerate.
TostOutcome tost(const GroupSummary& summary, const BeLimits& limits,
                 double alpha);

/// [diff - t_{1-a1,r}*se, diff + t_{1-a2,r}*se]; confidence coefficient
/// 1 - a1 - a2.
Interval ci_two_sided(const GroupSummary& summary, double alpha1, double alpha2);

/// [min{0, diff - t*se}, max{0, diff + t*se}]; always contains 0 and has
/// coverage 1-alpha away from a zero true difference.
Interval ci_min_max(const GroupSummary& summary, double alpha);

/// Strict containment of the interval in the open (theta_l, theta_u).
bool decide_by_ci(const Interval& interval, const BeLimits& limits);

/// exp of both endpoints: log scale -> ratio scale.
Interval back_transform(const Interval& interval);

} // namespace bequiv

#endif
