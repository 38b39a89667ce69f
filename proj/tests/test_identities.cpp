#include <doctest.h>

#include <stdexcept>

#include "parqr/identities.hpp"

using namespace parqr;

namespace {

const SuiteResult& find(const std::vector<SuiteResult>& rs, const char* name) {
    for (const auto& r : rs)
        if (r.suite == name) return r;
    FAIL("suite not present: ", name);
    return rs.front();
}

}  // namespace

TEST_CASE("all identity suites hold exhaustively at width 4") {
    IdentityRunConfig cfg;
    cfg.width = 4;
    cfg.exhaustive = true;
    const auto results = run_identity_suites(cfg);
    REQUIRE(results.size() == 6);
    for (const auto& r : results) {
        CAPTURE(r.suite);
        CHECK(r.violations == 0);
        CHECK(r.mode == "exhaustive");
    }
    // 2^8 operand pairs, two assertions each
    CHECK(find(results, "carry-parity-of-sum").evaluations == 512);
    // 2^16 input tuples
    CHECK(find(results, "qr-output-parity").evaluations == 65536);
    CHECK(find(results, "qr-word-parities").evaluations == 4 * 65536);
    CHECK(find(results, "block-parity-fold").evaluations == 65536);
    CHECK(find(results, "group-prediction-equivalence").evaluations == 256);
    CHECK(find(results, "checker-false-positives").evaluations == 2 * 65536);
}

TEST_CASE("identity suites hold exhaustively at width 5") {
    IdentityRunConfig cfg;
    cfg.width = 5;
    cfg.exhaustive = true;
    for (const auto& r : run_identity_suites(cfg)) {
        CAPTURE(r.suite);
        CHECK(r.violations == 0);
    }
}

TEST_CASE("carry parity identity holds exhaustively at width 8") {
    IdentityRunConfig cfg;
    cfg.width = 8;
    cfg.exhaustive = true;
    cfg.only_suite = "carry-parity-of-sum";
    const auto results = run_identity_suites(cfg);
    REQUIRE(results.size() == 1);
    CHECK(results[0].evaluations == 2ull * 65536);
    CHECK(results[0].violations == 0);
}

TEST_CASE("identity suites hold under random sampling at full widths") {
    for (unsigned width : {32u, 64u}) {
        CAPTURE(width);
        IdentityRunConfig cfg;
        cfg.width = width;
        cfg.exhaustive = false;
        cfg.samples = 20000;
        cfg.seed = 0xfeedULL + width;
        const auto results = run_identity_suites(cfg);
        REQUIRE(results.size() == 6);
        for (const auto& r : results) {
            CAPTURE(r.suite);
            CHECK(r.violations == 0);
            // the 8-bit network comparison stays exhaustive regardless
            if (r.suite == "group-prediction-equivalence") {
                CHECK(r.mode == "exhaustive");
                CHECK(r.evaluations == 256);
            } else {
                CHECK(r.mode == "random");
                CHECK(r.evaluations % 20000 == 0);
                CHECK(r.evaluations >= 20000);
            }
        }
    }
}

TEST_CASE("suite filter selects a single suite") {
    IdentityRunConfig cfg;
    cfg.width = 64;  // irrelevant for the fixed 8-bit domain
    cfg.exhaustive = true;
    cfg.only_suite = "group-prediction-equivalence";
    const auto results = run_identity_suites(cfg);
    REQUIRE(results.size() == 1);
    CHECK(results[0].suite == "group-prediction-equivalence");
    CHECK(results[0].violations == 0);
}

TEST_CASE("infeasible exhaustive widths are rejected") {
    IdentityRunConfig cfg;
    cfg.exhaustive = true;

    // tuple enumeration blows up past width 6
    cfg.width = 8;
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);

    // pair enumeration blows up past width 13
    cfg.width = 16;
    cfg.only_suite = "carry-parity-of-sum";
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);

    // width 7 tuples are already over the cap even for a single suite
    cfg.width = 7;
    cfg.only_suite = "qr-output-parity";
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);
}

TEST_CASE("identity run config is validated") {
    IdentityRunConfig cfg;

    cfg.width = 1;
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);
    cfg.width = 65;
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);

    cfg.width = 32;
    cfg.exhaustive = false;
    cfg.samples = 0;
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);

    cfg.samples = 10;
    cfg.only_suite = "no-such-suite";
    CHECK_THROWS_AS(run_identity_suites(cfg), std::invalid_argument);
}

TEST_CASE("suite names are published in run order") {
    const auto names = identity_suite_names();
    REQUIRE(names.size() == 6);
    CHECK(names.front() == "carry-parity-of-sum");
    CHECK(names.back() == "checker-false-positives");

    // every published name is runnable through the filter
    for (const auto& name : names) {
        IdentityRunConfig cfg;
        cfg.width = 4;
        cfg.exhaustive = true;
        cfg.only_suite = name;
        const auto results = run_identity_suites(cfg);
        REQUIRE(results.size() == 1);
        CHECK(results[0].suite == name);
    }
}
