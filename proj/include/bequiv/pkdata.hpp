#ifndef BEQUIV_PKDATA_HPP
#define BEQUIV_PKDATA_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bequiv {

enum class Arm { Test, Reference };

struct PkRecord {
    std::string subject_id;
    Arm arm;
    double value; // original PK units, strictly positive
};

/// Raw PK observations tagged by arm.
struct PkDataset {
    std::vector<PkRecord> records;

    std::vector<double> values(Arm arm) const;
};

/// Log-scale two-sample summary: everything the TOST statistics need.
struct GroupSummary {
    int n_t = 0;
    int n_r = 0;
    double xbar_t = 0.0; ///< mean of log values, test arm
    double xbar_r = 0.0; ///< mean of log values, reference arm
    double s_t = 0.0;    ///< log-scale sample SD, test arm
    double s_r = 0.0;    ///< log-scale sample SD, reference arm
    double s_p = 0.0;    ///< pooled SD
    double se_diff = 0.0; ///< standard error of xbar_t - xbar_r
    double df = 0.0;     ///< n_t + n_r - 2

    double mean_diff() const { return xbar_t - xbar_r; }
};

/// Parses CSV with header `subject_id,arm,value`; arm is T or R
/// (case-insensitive). Throws parse_error naming the offending row.
PkDataset parse_csv(std::istream& in);
PkDataset parse_csv_file(const std::string& path);

/// exp of the arithmetic mean of logs; all values must be positive.
double geometric_mean(std::span<const double> values);

/// Pooled-variance two-sample summary of the log-transformed dataset.
/// Requires at least two records per arm.
GroupSummary summarize(const PkDataset& dataset);

/// Summary from already log-transformed per-arm samples (simulation path).
GroupSummary summarize_logs(std::span<const double> log_t,
                            std::span<const double> log_r);

/// E[GM] of n lognormal draws: exp(mu + sigma^2 / (2n)).
double gm_expectation(double mu, double sigma, int n);

} // namespace bequiv

#endif
