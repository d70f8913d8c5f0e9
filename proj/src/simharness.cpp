#include "bequiv/simharness.hpp"

#include "bequiv/optimal.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace bequiv {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

// Runs fn over fixed-size replication blocks; block results are stored by
// index and reduced in order afterwards, so the aggregate is the same for
// every worker count.
template <typename Block, typename Fn>
std::vector<Block> run_blocks(std::uint64_t replications, int workers, Fn fn) {
    std::uint64_t n_blocks = (replications + kBlockSize - 1) / kBlockSize;
    std::vector<Block> results(n_blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) break;
            std::uint64_t begin = b * kBlockSize;
            std::uint64_t end = std::min(begin + kBlockSize, replications);
            results[b] = fn(begin, end);
        }
    };
    int nthreads = resolve_workers(workers);
    if (nthreads <= 1 || n_blocks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

SimReport tally(const std::string& procedure, const Scenario& scenario,
                std::uint64_t replications, std::uint64_t seed, int workers,
                const std::function<bool(const GroupSummary&)>& hit) {
    scenario.validate();
    if (replications < 1) {
        throw std::domain_error("simharness: replications must be >= 1");
    }
    auto blocks = run_blocks<std::uint64_t>(
        replications, workers, [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t h = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                RepRng rng(seed, i);
                GroupSummary s = simulate_dataset(scenario, rng);
                if (hit(s)) ++h;
            }
            return h;
        });
    SimReport report;
    report.procedure = procedure;
    report.replications = replications;
    report.seed = seed;
    for (std::uint64_t h : blocks) report.hits += h;
    report.rate = static_cast<double>(report.hits) / static_cast<double>(replications);
    report.std_error =
        std::sqrt(report.rate * (1.0 - report.rate) / static_cast<double>(replications));
    return report;
}

// One-sample mapping of the known-variance UMP test: mu = mu_T - mu_R,
// n = n_t, theta = theta_u (symmetric limits assumed).
SimReport ump_rejection_rate(const Scenario& scenario,
                             std::uint64_t replications, std::uint64_t seed,
                             int workers) {
    scenario.validate();
    if (replications < 1) {
        throw std::domain_error("simharness: replications must be >= 1");
    }
    UmpSpec spec{scenario.alpha, scenario.limits.theta_u, scenario.sigma,
                 scenario.n_t};
    spec.validate();
    double mu = scenario.mu_diff();
    double root_n = std::sqrt(static_cast<double>(spec.n));
    double psi = ump_psi(spec.alpha, root_n * spec.theta, spec.sigma);
    auto blocks = run_blocks<std::uint64_t>(
        replications, workers, [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t h = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                RepRng rng(seed, i);
                double sum = 0.0;
                for (int k = 0; k < scenario.n_t; ++k) {
                    sum += mu + scenario.sigma * rng.next_normal();
                }
                if (root_n * std::fabs(sum / scenario.n_t) <= psi) ++h;
            }
            return h;
        });
    SimReport report;
    report.procedure = "ump_known_sigma";
    report.replications = replications;
    report.seed = seed;
    for (std::uint64_t h : blocks) report.hits += h;
    report.rate = static_cast<double>(report.hits) / static_cast<double>(replications);
    report.std_error =
        std::sqrt(report.rate * (1.0 - report.rate) / static_cast<double>(replications));
    return report;
}

} // namespace

RepRng::RepRng(std::uint64_t seed, std::uint64_t replication) {
    // Two mixing rounds separate the key halves before the stream starts.
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= replication * 0xda942042e4dd58b5ULL;
    std::uint64_t b = splitmix64(s);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
}

std::uint64_t RepRng::next_u64() { return splitmix64(state_); }

double RepRng::next_uniform() {
    // (0, 1]: keep log() in Box-Muller finite.
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RepRng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

void Scenario::validate() const {
    if (!(sigma > 0.0)) {
        throw std::domain_error("Scenario: sigma must be positive");
    }
    if (n_t < 2 || n_r < 2) {
        throw std::domain_error("Scenario: group sizes must be >= 2");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::domain_error("Scenario: alpha must be in (0, 0.5)");
    }
}

std::string ProcedureSpec::name() const {
    switch (kind) {
        case Procedure::tost: return "tost";
        case Procedure::ci_equal: return "ci_equal";
        case Procedure::ci_minmax: return "ci_minmax";
        case Procedure::ci_unequal:
            return "ci_unequal:" + std::to_string(alpha1) + "," + std::to_string(alpha2);
        case Procedure::ump_known_sigma: return "ump_known_sigma";
    }
    return "?";
}

ProcedureSpec ProcedureSpec::parse(const std::string& text) {
    if (text == "tost") return {Procedure::tost};
    if (text == "ci_equal") return {Procedure::ci_equal};
    if (text == "ci_minmax") return {Procedure::ci_minmax};
    if (text == "ump_known_sigma") return {Procedure::ump_known_sigma};
    const std::string prefix = "ci_unequal:";
    if (text.rfind(prefix, 0) == 0) {
        auto rest = text.substr(prefix.size());
        auto comma = rest.find(',');
        if (comma != std::string::npos) {
            try {
                double a1 = std::stod(rest.substr(0, comma));
                double a2 = std::stod(rest.substr(comma + 1));
                if (a1 > 0.0 && a1 < 0.5 && a2 > 0.0 && a2 < 0.5) {
                    return {Procedure::ci_unequal, a1, a2};
                }
            } catch (const std::exception&) {
            }
        }
    }
    throw std::invalid_argument("unknown procedure: " + text);
}

std::string CiMethodSpec::name() const {
    switch (kind) {
        case CiMethod::equal: return "equal:" + std::to_string(alpha1);
        case CiMethod::minmax: return "minmax:" + std::to_string(alpha1);
        case CiMethod::unequal:
            return "unequal:" + std::to_string(alpha1) + "," + std::to_string(alpha2);
    }
    return "?";
}

GroupSummary simulate_dataset(const Scenario& scenario, RepRng& rng) {
    scenario.validate();
    std::vector<double> log_t(scenario.n_t), log_r(scenario.n_r);
    for (double& x : log_t) x = scenario.mu_t + scenario.sigma * rng.next_normal();
    for (double& x : log_r) x = scenario.mu_r + scenario.sigma * rng.next_normal();
    return summarize_logs(log_t, log_r);
}

SimReport estimate_rejection_rate(const ProcedureSpec& procedure,
                                  const Scenario& scenario,
                                  std::uint64_t replications, std::uint64_t seed,
                                  int workers) {
    std::function<bool(const GroupSummary&)> hit;
    switch (procedure.kind) {
        case Procedure::tost:
            hit = [&](const GroupSummary& s) {
                return tost(s, scenario.limits, scenario.alpha).reject;
            };
            break;
        case Procedure::ci_equal:
            hit = [&](const GroupSummary& s) {
                return decide_by_ci(ci_two_sided(s, scenario.alpha, scenario.alpha),
                                    scenario.limits);
            };
            break;
        case Procedure::ci_minmax:
            hit = [&](const GroupSummary& s) {
                return decide_by_ci(ci_min_max(s, scenario.alpha), scenario.limits);
            };
            break;
        case Procedure::ci_unequal:
            hit = [&](const GroupSummary& s) {
                return decide_by_ci(
                    ci_two_sided(s, procedure.alpha1, procedure.alpha2),
                    scenario.limits);
            };
            break;
        case Procedure::ump_known_sigma:
            return ump_rejection_rate(scenario, replications, seed, workers);
    }
    return tally(procedure.name(), scenario, replications, seed, workers, hit);
}

SimReport estimate_coverage(const CiMethodSpec& method, const Scenario& scenario,
                            std::uint64_t replications, std::uint64_t seed,
                            int workers) {
    double true_diff = scenario.mu_diff();
    std::function<bool(const GroupSummary&)> hit;
    switch (method.kind) {
        case CiMethod::equal:
            hit = [&, true_diff](const GroupSummary& s) {
                Interval ci = ci_two_sided(s, method.alpha1, method.alpha1);
                return ci.lower <= true_diff && true_diff <= ci.upper;
            };
            break;
        case CiMethod::unequal:
            hit = [&, true_diff](const GroupSummary& s) {
                Interval ci = ci_two_sided(s, method.alpha1, method.alpha2);
                return ci.lower <= true_diff && true_diff <= ci.upper;
            };
            break;
        case CiMethod::minmax:
            hit = [&, true_diff](const GroupSummary& s) {
                Interval ci = ci_min_max(s, method.alpha1);
                return ci.lower <= true_diff && true_diff <= ci.upper;
            };
            break;
    }
    return tally("coverage_" + method.name(), scenario, replications, seed,
                 workers, hit);
}

GmBiasResult gm_bias_check(double mu, double sigma, int n,
                           std::uint64_t replications, std::uint64_t seed,
                           int workers) {
    if (n < 1) {
        throw std::domain_error("gm_bias_check: n must be >= 1");
    }
    if (sigma < 0.0) {
        throw std::domain_error("gm_bias_check: sigma must be >= 0");
    }
    if (replications < 1) {
        throw std::domain_error("gm_bias_check: replications must be >= 1");
    }
    struct Sums {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    auto blocks = run_blocks<Sums>(
        replications, workers, [&](std::uint64_t begin, std::uint64_t end) {
            Sums acc;
            for (std::uint64_t i = begin; i < end; ++i) {
                RepRng rng(seed, i);
                double log_sum = 0.0;
                for (int k = 0; k < n; ++k) {
                    log_sum += mu + sigma * rng.next_normal();
                }
                double gm = std::exp(log_sum / n);
                acc.sum += gm;
                acc.sumsq += gm * gm;
            }
            return acc;
        });
    double sum = 0.0, sumsq = 0.0;
    for (const auto& b : blocks) {
        sum += b.sum;
        sumsq += b.sumsq;
    }
    double reps = static_cast<double>(replications);
    double mean = sum / reps;
    double var = replications > 1 ? (sumsq - reps * mean * mean) / (reps - 1.0) : 0.0;
    if (var < 0.0) var = 0.0;
    return GmBiasResult{mean, std::sqrt(var / reps), gm_expectation(mu, sigma, n)};
}

} // namespace bequiv
