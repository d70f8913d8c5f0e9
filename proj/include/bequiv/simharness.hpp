#ifndef BEQUIV_SIMHARNESS_HPP
#define BEQUIV_SIMHARNESS_HPP

#include "bequiv/equivtest.hpp"
#include "bequiv/pkdata.hpp"

#include <cstdint>
#include <string>

namespace bequiv {

/// Per-replication random stream. Keyed by (seed, replication index) so the
/// stream a replication sees does not depend on scheduling or worker count.
class RepRng {
public:
    RepRng(std::uint64_t seed, std::uint64_t replication);

    std::uint64_t next_u64();
    double next_uniform(); ///< in (0, 1]
    double next_normal();  ///< standard normal, Box-Muller

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct Scenario {
    double mu_t;
    double mu_r;
    double sigma; ///< log-scale common SD, > 0
    int n_t;
    int n_r;
    double alpha;
    BeLimits limits = BeLimits::regulatory();

    void validate() const;
    double mu_diff() const { return mu_t - mu_r; }
};

struct SimReport {
    std::string procedure;
    std::uint64_t replications = 0;
    std::uint64_t hits = 0;
    double rate = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

enum class Procedure { tost, ci_equal, ci_minmax, ci_unequal, ump_known_sigma };

/// Procedure identifier plus the tail splits the unequal-tail CI needs.
struct ProcedureSpec {
    Procedure kind;
    double alpha1 = 0.0; ///< ci_unequal only
    double alpha2 = 0.0;

    std::string name() const;
    /// Accepts "tost", "ci_equal", "ci_minmax", "ci_unequal:a1,a2",
    /// "ump_known_sigma"; throws std::invalid_argument otherwise.
    static ProcedureSpec parse(const std::string& text);
};

enum class CiMethod { equal, unequal, minmax };

struct CiMethodSpec {
    CiMethod kind;
    double alpha1 = 0.0;
    double alpha2 = 0.0; ///< unequal only

    std::string name() const;
};

/// One simulated two-sample experiment under the scenario.
GroupSummary simulate_dataset(const Scenario& scenario, RepRng& rng);

/// Empirical P(reject) for the procedure under the scenario. Deterministic
/// for fixed (seed, scenario, replications), independent of worker count.
SimReport estimate_rejection_rate(const ProcedureSpec& procedure,
                                  const Scenario& scenario,
                                  std::uint64_t replications,
                                  std::uint64_t seed, int workers = 0);

/// Empirical P(mu_T - mu_R in interval) for the CI method.
SimReport estimate_coverage(const CiMethodSpec& method, const Scenario& scenario,
                            std::uint64_t replications, std::uint64_t seed,
                            int workers = 0);

struct GmBiasResult {
    double empirical_mean;
    double empirical_se;
    double predicted; ///< gm_expectation(mu, sigma, n)
};

/// Mean geometric mean of lognormal samples against its closed form.
GmBiasResult gm_bias_check(double mu, double sigma, int n,
                           std::uint64_t replications, std::uint64_t seed,
                           int workers = 0);

} // namespace bequiv

#endif
