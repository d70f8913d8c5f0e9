#include "bequiv/pkdata.hpp"

#include "bequiv/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bequiv {

namespace {

std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.push_back("");
    }
    return out;
}

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v, double m) {
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

std::vector<double> PkDataset::values(Arm arm) const {
    std::vector<double> out;
    for (const auto& rec : records) {
        if (rec.arm == arm) out.push_back(rec.value);
    }
    return out;
}

PkDataset parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("empty input: expected header subject_id,arm,value");
    }
    auto header = split_fields(line);
    if (header.size() < 3 || header[0] != "subject_id" || header[1] != "arm" ||
        header[2] != "value") {
        throw parse_error("bad header: expected subject_id,arm,value");
    }

    PkDataset ds;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 3) {
            throw parse_error("row " + std::to_string(row) +
                              ": expected 3 columns, got " +
                              std::to_string(fields.size()));
        }
        std::string arm_str = fields[1];
        std::transform(arm_str.begin(), arm_str.end(), arm_str.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        Arm arm;
        if (arm_str == "T") {
            arm = Arm::Test;
        } else if (arm_str == "R") {
            arm = Arm::Reference;
        } else {
            throw parse_error("row " + std::to_string(row) +
                              ": unknown arm label '" + fields[1] + "'");
        }
        double value;
        try {
            size_t pos = 0;
            value = std::stod(fields[2], &pos);
            if (pos != fields[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw parse_error("row " + std::to_string(row) +
                              ": cannot parse value '" + fields[2] + "'");
        }
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw parse_error("row " + std::to_string(row) +
                              ": value must be a positive real, got " + fields[2]);
        }
        ds.records.push_back(PkRecord{fields[0], arm, value});
    }

    if (ds.values(Arm::Test).empty() || ds.values(Arm::Reference).empty()) {
        throw parse_error("empty arm: need data for both T and R");
    }
    return ds;
}

PkDataset parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open file: " + path);
    }
    return parse_csv(in);
}

double geometric_mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::domain_error("geometric_mean: empty input");
    }
    double log_sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw std::domain_error("geometric_mean: values must be positive");
        }
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

GroupSummary summarize_logs(std::span<const double> log_t,
                            std::span<const double> log_r) {
    if (log_t.size() < 2 || log_r.size() < 2) {
        throw std::domain_error("summarize: need at least 2 observations per arm");
    }
    GroupSummary s;
    s.n_t = static_cast<int>(log_t.size());
    s.n_r = static_cast<int>(log_r.size());
    s.xbar_t = mean(log_t);
    s.xbar_r = mean(log_r);
    s.s_t = sample_sd(log_t, s.xbar_t);
    s.s_r = sample_sd(log_r, s.xbar_r);
    s.df = static_cast<double>(s.n_t + s.n_r - 2);
    double pooled_var = ((s.n_t - 1) * s.s_t * s.s_t + (s.n_r - 1) * s.s_r * s.s_r) / s.df;
    s.s_p = std::sqrt(pooled_var);
    s.se_diff = s.s_p * std::sqrt(1.0 / s.n_t + 1.0 / s.n_r);
    return s;
}

GroupSummary summarize(const PkDataset& dataset) {
    auto vt = dataset.values(Arm::Test);
    auto vr = dataset.values(Arm::Reference);
    for (auto* v : {&vt, &vr}) {
        for (double& x : *v) {
            x = std::log(x);
        }
    }
    return summarize_logs(vt, vr);
}

double gm_expectation(double mu, double sigma, int n) {
    if (n < 1) {
        throw std::domain_error("gm_expectation: n must be >= 1");
    }
    if (sigma < 0.0) {
        throw std::domain_error("gm_expectation: sigma must be >= 0");
    }
    return std::exp(mu + sigma * sigma / (2.0 * n));
}

} // namespace bequiv
