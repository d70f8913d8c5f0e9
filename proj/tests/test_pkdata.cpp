#include "bequiv/pkdata.hpp"

#include "bequiv/errors.hpp"
#include "bequiv/simharness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace bequiv;

TEST_CASE("parse_csv accepts well-formed input") {
    std::istringstream in(
        "subject_id,arm,value\n"
        "s1,T,100\n"
        "s2,t,120\n"
        "s3,R,95\n"
        "s4,r,110\n");
    PkDataset ds = parse_csv(in);
    CHECK(ds.records.size() == 4);
    CHECK(ds.values(Arm::Test) == std::vector<double>{100.0, 120.0});
    CHECK(ds.values(Arm::Reference) == std::vector<double>{95.0, 110.0});
}

TEST_CASE("parse_csv error paths") {
    SUBCASE("non-positive value names the row") {
        std::istringstream in(
            "subject_id,arm,value\ns1,T,100\ns2,T,120\ns3,R,95\ns4,R,110\ns5,T,-3\n");
        CHECK_THROWS_WITH_AS(parse_csv(in),
                             doctest::Contains("row 6"), parse_error);
    }
    SUBCASE("unknown arm") {
        std::istringstream in("subject_id,arm,value\ns1,X,100\n");
        CHECK_THROWS_AS(parse_csv(in), parse_error);
    }
    SUBCASE("header only") {
        std::istringstream in("subject_id,arm,value\n");
        CHECK_THROWS_WITH_AS(parse_csv(in), doctest::Contains("empty arm"),
                             parse_error);
    }
    SUBCASE("missing column") {
        std::istringstream in("subject_id,value\ns1,100\n");
        CHECK_THROWS_AS(parse_csv(in), parse_error);
    }
    SUBCASE("one arm absent") {
        std::istringstream in("subject_id,arm,value\ns1,T,100\ns2,T,90\n");
        CHECK_THROWS_WITH_AS(parse_csv(in), doctest::Contains("empty arm"),
                             parse_error);
    }
}

TEST_CASE("geometric_mean") {
    std::vector<double> constant(7, 3.25);
    CHECK(geometric_mean(constant) == doctest::Approx(3.25).epsilon(1e-14));
    std::vector<double> pair{2.0, 8.0};
    CHECK(geometric_mean(pair) == doctest::Approx(4.0).epsilon(1e-14));
    std::vector<double> four{1.0, 2.0, 3.0, 4.0};
    CHECK(geometric_mean(four) ==
          doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(geometric_mean(std::vector<double>{}), std::domain_error);
    std::vector<double> withzero{1.0, 0.0};
    CHECK_THROWS_AS(geometric_mean(withzero), std::domain_error);
}

TEST_CASE("geometric mean equals exp of mean log on random data") {
    std::mt19937_64 gen(99);
    std::lognormal_distribution<double> dist(0.3, 1.1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + trial % 17);
        for (double& x : v) x = dist(gen);
        double log_mean = 0.0;
        for (double x : v) log_mean += std::log(x);
        log_mean /= v.size();
        double gm = geometric_mean(v);
        CHECK(std::fabs(gm - std::exp(log_mean)) <= 1e-12 * gm);
    }
}

TEST_CASE("summarize hand example") {
    PkDataset ds;
    ds.records = {{"a", Arm::Test, std::exp(0.0)},
                  {"b", Arm::Test, std::exp(2.0)},
                  {"c", Arm::Reference, std::exp(1.0)},
                  {"d", Arm::Reference, std::exp(3.0)}};
    GroupSummary s = summarize(ds);
    CHECK(s.xbar_t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.xbar_r == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.s_t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.s_r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.s_p == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.se_diff == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.df == 2.0);
}

TEST_CASE("summarize degenerate and symmetry cases") {
    PkDataset constant;
    constant.records = {{"a", Arm::Test, 7.0},
                        {"b", Arm::Test, 7.0},
                        {"c", Arm::Reference, 7.0},
                        {"d", Arm::Reference, 7.0}};
    GroupSummary s = summarize(constant);
    CHECK(s.s_p == 0.0);
    CHECK(s.se_diff == 0.0);

    PkDataset ds;
    ds.records = {{"a", Arm::Test, 100.0},  {"b", Arm::Test, 130.0},
                  {"c", Arm::Test, 80.0},   {"d", Arm::Reference, 95.0},
                  {"e", Arm::Reference, 111.0}};
    GroupSummary orig = summarize(ds);

    PkDataset swapped = ds;
    for (auto& rec : swapped.records) {
        rec.arm = rec.arm == Arm::Test ? Arm::Reference : Arm::Test;
    }
    GroupSummary sw = summarize(swapped);
    CHECK(sw.mean_diff() == doctest::Approx(-orig.mean_diff()).epsilon(1e-14));
    CHECK(sw.se_diff == doctest::Approx(orig.se_diff).epsilon(1e-14));

    PkDataset shuffled = ds;
    std::reverse(shuffled.records.begin(), shuffled.records.end());
    GroupSummary sh = summarize(shuffled);
    CHECK(sh.xbar_t == doctest::Approx(orig.xbar_t).epsilon(1e-14));
    CHECK(sh.se_diff == doctest::Approx(orig.se_diff).epsilon(1e-14));

    PkDataset tiny;
    tiny.records = {{"a", Arm::Test, 1.0}, {"b", Arm::Reference, 1.0},
                    {"c", Arm::Reference, 2.0}};
    CHECK_THROWS_AS(summarize(tiny), std::domain_error);
}

TEST_CASE("gm_expectation") {
    CHECK(gm_expectation(0.7, 0.0, 12) == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
    CHECK(gm_expectation(0.0, 0.5, 10) == doctest::Approx(std::exp(0.0125)).epsilon(1e-14));
    CHECK(gm_expectation(0.0, 1.0, 1) == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(gm_expectation(0.0, 1.0, 0), std::domain_error);

    // approaches exp(mu) from above as n grows
    double prev = gm_expectation(0.2, 1.0, 1);
    for (int n : {10, 100, 10000}) {
        double cur = gm_expectation(0.2, 1.0, n);
        CHECK(cur < prev);
        CHECK(cur > std::exp(0.2));
        prev = cur;
    }
}

TEST_CASE("gm expectation agrees with Monte Carlo") {
    GmBiasResult r = gm_bias_check(0.0, 1.0, 1, 200000, 42);
    CHECK(std::fabs(r.empirical_mean - std::exp(0.5)) < 4.0 * r.empirical_se);
    CHECK(r.predicted == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
}
