#include "bequiv/equivtest.hpp"
#include "bequiv/errors.hpp"
#include "bequiv/optimal.hpp"
#include "bequiv/pkdata.hpp"
#include "bequiv/power.hpp"
#include "bequiv/simharness.hpp"
#include "bequiv/specialfn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using bequiv::BeLimits;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct LimitsFlag {
    double lo = 0.8;
    double hi = 1.25;
};

BeLimits parse_limits(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw bequiv::parse_error("limits must be LO,HI on the ratio scale");
    }
    double lo, hi;
    try {
        lo = std::stod(text.substr(0, comma));
        hi = std::stod(text.substr(comma + 1));
    } catch (const std::exception&) {
        throw bequiv::parse_error("limits must be numeric: " + text);
    }
    if (!(lo > 0.0)) {
        throw bequiv::parse_error("limits must be positive ratios");
    }
    if (!(lo < hi)) {
        throw bequiv::parse_error("limits must satisfy LO < HI");
    }
    BeLimits limits = BeLimits::from_ratio(lo, hi);
    if (!limits.symmetric(1e-9)) {
        std::cerr << "warning: limits are not equal-tailed on the log scale; "
                     "the (1-2*alpha) CI / size-alpha TOST equivalence needs "
                     "ln(LO) = -ln(HI)\n";
    }
    return limits;
}

std::uint64_t fnv1a_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw bequiv::parse_error("cannot open file: " + path);
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string fnv1a_digest_hex(const std::string& path) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_digest(path)));
    return hex;
}

json limits_json(const BeLimits& limits) {
    return json{{"theta_l", limits.theta_l},
                {"theta_u", limits.theta_u},
                {"delta_l", limits.delta_l()},
                {"delta_u", limits.delta_u()}};
}

json interval_json(const bequiv::Interval& iv) {
    return json{{"lower", iv.lower}, {"upper", iv.upper}};
}

void emit(const json& doc, const std::string& output_path) {
    std::string text = doc.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path);
        if (!out) {
            throw bequiv::parse_error("cannot write output file: " + output_path);
        }
        out << text;
    }
}

int run_analyze(const std::string& input, double alpha,
                const std::string& limits_text, const std::string& ci_method,
                const std::string& output) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw bequiv::parse_error("alpha must be in (0, 0.5)");
    }
    BeLimits limits = parse_limits(limits_text);
    bequiv::PkDataset dataset = bequiv::parse_csv_file(input);
    bequiv::GroupSummary summary = bequiv::summarize(dataset);
    bequiv::TostOutcome outcome = bequiv::tost(summary, limits, alpha);

    bequiv::Interval ci_log;
    if (ci_method == "equal") {
        ci_log = bequiv::ci_two_sided(summary, alpha, alpha);
    } else if (ci_method == "minmax") {
        ci_log = bequiv::ci_min_max(summary, alpha);
    } else if (ci_method.rfind("unequal:", 0) == 0) {
        auto rest = ci_method.substr(8);
        auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw bequiv::parse_error("ci-method unequal needs a1,a2");
        }
        double a1 = std::stod(rest.substr(0, comma));
        double a2 = std::stod(rest.substr(comma + 1));
        ci_log = bequiv::ci_two_sided(summary, a1, a2);
    } else {
        throw bequiv::parse_error("unknown ci-method: " + ci_method);
    }

    json doc;
    doc["toolkit_version"] = kVersion;
    doc["input_digest"] = fnv1a_digest_hex(input);
    doc["alpha"] = alpha;
    doc["ci_method"] = ci_method;
    doc["limits"] = limits_json(limits);
    doc["summary"] = json{{"n_t", summary.n_t},     {"n_r", summary.n_r},
                          {"xbar_t", summary.xbar_t}, {"xbar_r", summary.xbar_r},
                          {"s_t", summary.s_t},     {"s_r", summary.s_r},
                          {"s_p", summary.s_p},     {"se_diff", summary.se_diff},
                          {"df", summary.df}};
    doc["gmr"] = std::exp(summary.mean_diff());
    doc["ci_log"] = interval_json(ci_log);
    doc["ci_ratio"] = interval_json(bequiv::back_transform(ci_log));
    doc["tost"] = json{{"t_lower", outcome.t_lower}, {"t_upper", outcome.t_upper},
                       {"critical", outcome.critical}, {"p_lower", outcome.p_lower},
                       {"p_upper", outcome.p_upper},  {"p_overall", outcome.p_overall},
                       {"reject", outcome.reject},    {"degenerate", outcome.degenerate}};
    doc["ci_decision"] = bequiv::decide_by_ci(ci_log, limits);
    doc["decision"] = outcome.reject ? "bioequivalent" : "not bioequivalent";
    emit(doc, output);
    return kExitOk;
}

std::vector<double> parse_curve(const std::string& text) {
    std::vector<double> gmrs;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        double g = std::stod(field);
        if (!(g > 0.0)) {
            throw bequiv::parse_error("curve GMR values must be positive");
        }
        gmrs.push_back(g);
    }
    if (gmrs.empty()) {
        throw bequiv::parse_error("curve grid is empty");
    }
    return gmrs;
}

int run_power(double gmr, double sigma, int n_t, int n_r, double alpha,
              const std::string& limits_text, const std::string& curve) {
    if (!(gmr > 0.0)) {
        throw bequiv::parse_error("gmr must be positive");
    }
    BeLimits limits = parse_limits(limits_text);
    bequiv::PowerParams params{std::log(gmr), n_t, n_r, sigma, alpha, limits};
    params.validate();
    if (curve.empty()) {
        std::printf("%.9g\n", bequiv::exact_power(params));
        return kExitOk;
    }
    std::vector<double> mu_grid;
    for (double g : parse_curve(curve)) {
        mu_grid.push_back(std::log(g));
    }
    std::printf("mu_diff,power\n");
    for (const auto& [mu, pw] : bequiv::power_curve(params, mu_grid)) {
        std::printf("%.17g,%.17g\n", mu, pw);
    }
    return kExitOk;
}

int run_samplesize(double target_power, double gmr, double sigma, double alpha,
                   const std::string& limits_text, double ratio,
                   const std::string& output) {
    if (!(gmr > 0.0)) {
        throw bequiv::parse_error("gmr must be positive");
    }
    BeLimits limits = parse_limits(limits_text);
    auto result = bequiv::sample_size(target_power, std::log(gmr), sigma, alpha,
                                      limits, ratio);
    json doc;
    doc["toolkit_version"] = kVersion;
    doc["target_power"] = target_power;
    doc["gmr"] = gmr;
    doc["sigma"] = sigma;
    doc["alpha"] = alpha;
    doc["limits"] = limits_json(limits);
    doc["ratio"] = ratio;
    doc["n_t"] = result.n_t;
    doc["n_r"] = result.n_r;
    doc["achieved_power"] = result.achieved_power;
    emit(doc, output);
    return kExitOk;
}

int run_simulate(const std::string& procedure, double mu_t, double mu_r,
                 double sigma, int n_t, int n_r, double alpha,
                 const std::string& limits_text, std::uint64_t reps,
                 std::uint64_t seed, const std::string& mode, int workers,
                 const std::string& output) {
    BeLimits limits = parse_limits(limits_text);
    bequiv::Scenario scenario{mu_t, mu_r, sigma, n_t, n_r, alpha, limits};
    scenario.validate();

    bequiv::SimReport report;
    if (mode == "size" || mode == "power") {
        auto spec = bequiv::ProcedureSpec::parse(procedure);
        report = bequiv::estimate_rejection_rate(spec, scenario, reps, seed, workers);
    } else if (mode == "coverage") {
        bequiv::CiMethodSpec method;
        if (procedure == "ci_equal") {
            method = {bequiv::CiMethod::equal, alpha};
        } else if (procedure == "ci_minmax") {
            method = {bequiv::CiMethod::minmax, alpha};
        } else if (procedure.rfind("ci_unequal:", 0) == 0) {
            auto spec = bequiv::ProcedureSpec::parse(procedure);
            method = {bequiv::CiMethod::unequal, spec.alpha1, spec.alpha2};
        } else {
            throw std::invalid_argument("coverage mode needs a ci_* procedure, got " +
                                        procedure);
        }
        report = bequiv::estimate_coverage(method, scenario, reps, seed, workers);
    } else {
        throw bequiv::parse_error("mode must be size, power, or coverage");
    }

    json doc;
    doc["toolkit_version"] = kVersion;
    doc["procedure"] = report.procedure;
    doc["mode"] = mode;
    doc["scenario"] = json{{"mu_t", mu_t},   {"mu_r", mu_r}, {"sigma", sigma},
                           {"n_t", n_t},     {"n_r", n_r},   {"alpha", alpha},
                           {"limits", limits_json(limits)}};
    doc["replications"] = report.replications;
    doc["hits"] = report.hits;
    doc["rate"] = report.rate;
    doc["std_error"] = report.std_error;
    doc["seed"] = report.seed;
    emit(doc, output);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bioequivalence statistics toolkit: TOST, confidence "
                 "intervals, exact power, and Monte Carlo verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "TOST + CI analysis of a PK CSV");
    std::string an_input, an_limits = "0.8,1.25", an_method = "equal", an_output;
    double an_alpha = 0.05;
    analyze->add_option("--input", an_input, "CSV with header subject_id,arm,value")
        ->required();
    analyze->add_option("--alpha", an_alpha, "one-sided test size");
    analyze->add_option("--limits", an_limits, "ratio-scale limits LO,HI");
    analyze->add_option("--ci-method", an_method,
                        "equal | minmax | unequal:a1,a2");
    analyze->add_option("--output", an_output, "write JSON report here");

    // power
    auto* power = app.add_subcommand("power", "Exact TOST power");
    double pw_gmr = 1.0, pw_sigma = 0.0, pw_alpha = 0.05;
    int pw_nt = 0, pw_nr = 0;
    std::string pw_limits = "0.8,1.25", pw_curve;
    power->add_option("--gmr", pw_gmr, "true geometric mean ratio")->required();
    power->add_option("--sigma", pw_sigma, "log-scale SD")->required();
    power->add_option("--n-t", pw_nt, "test group size")->required();
    power->add_option("--n-r", pw_nr, "reference group size")->required();
    power->add_option("--alpha", pw_alpha, "one-sided test size");
    power->add_option("--limits", pw_limits, "ratio-scale limits LO,HI");
    power->add_option("--curve", pw_curve,
                      "comma-separated GMR grid; emits mu_diff,power CSV");

    // samplesize
    auto* samplesize = app.add_subcommand("samplesize", "Smallest n reaching a power target");
    double ss_target = 0.8, ss_gmr = 1.0, ss_sigma = 0.0, ss_alpha = 0.05,
           ss_ratio = 1.0;
    std::string ss_limits = "0.8,1.25", ss_output;
    samplesize->add_option("--target-power", ss_target, "required power")->required();
    samplesize->add_option("--gmr", ss_gmr, "true geometric mean ratio")->required();
    samplesize->add_option("--sigma", ss_sigma, "log-scale SD")->required();
    samplesize->add_option("--alpha", ss_alpha, "one-sided test size");
    samplesize->add_option("--limits", ss_limits, "ratio-scale limits LO,HI");
    samplesize->add_option("--ratio", ss_ratio, "allocation n_r : n_t");
    samplesize->add_option("--output", ss_output, "write JSON here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power/coverage");
    std::string sim_proc, sim_limits = "0.8,1.25", sim_mode = "size", sim_output;
    double sim_mut = 0.0, sim_mur = 0.0, sim_sigma = 0.0, sim_alpha = 0.05;
    int sim_nt = 0, sim_nr = 0, sim_workers = 0;
    std::uint64_t sim_reps = 200000, sim_seed = 0;
    simulate->add_option("--procedure", sim_proc,
                         "tost | ci_equal | ci_minmax | ci_unequal:a1,a2 | "
                         "ump_known_sigma")
        ->required();
    simulate->add_option("--mu-t", sim_mut, "log-scale test mean");
    simulate->add_option("--mu-r", sim_mur, "log-scale reference mean");
    simulate->add_option("--sigma", sim_sigma, "log-scale SD")->required();
    simulate->add_option("--n-t", sim_nt, "test group size")->required();
    simulate->add_option("--n-r", sim_nr, "reference group size")->required();
    simulate->add_option("--alpha", sim_alpha, "one-sided test size");
    simulate->add_option("--limits", sim_limits, "ratio-scale limits LO,HI");
    simulate->add_option("--reps", sim_reps, "replication count");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--mode", sim_mode, "size | power | coverage");
    simulate->add_option("--workers", sim_workers, "worker threads (0 = auto)");
    simulate->add_option("--output", sim_output, "write JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze) {
            return run_analyze(an_input, an_alpha, an_limits, an_method, an_output);
        }
        if (*power) {
            return run_power(pw_gmr, pw_sigma, pw_nt, pw_nr, pw_alpha, pw_limits,
                             pw_curve);
        }
        if (*samplesize) {
            return run_samplesize(ss_target, ss_gmr, ss_sigma, ss_alpha, ss_limits,
                                  ss_ratio, ss_output);
        }
        if (*simulate) {
            return run_simulate(sim_proc, sim_mut, sim_mur, sim_sigma, sim_nt,
                                sim_nr, sim_alpha, sim_limits, sim_reps, sim_seed,
                                sim_mode, sim_workers, sim_output);
        }
    } catch (const bequiv::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const bequiv::numerical_error& e) {
        std::cerr << "numerical error: " << e.what()
                  << " (achieved tolerance " << e.achieved_tolerance() << ")\n";
        return kExitNumerical;
    } catch (const bequiv::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
