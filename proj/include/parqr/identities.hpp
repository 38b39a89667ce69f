// Identity suites: the algebraic facts the checkers rest on, each
// verifiable exhaustively at small widths or by randomized sampling at
// full width. Violations are counted, never masked.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parqr {

struct SuiteResult {
    std::string suite;
    std::string mode;  // "exhaustive" or "random"
    // evaluations counts elementary asserted equalities, not input cases:
    // a suite asserting four word parities per tuple reports 4x the tuples.
    std::uint64_t evaluations = 0;
    std::uint64_t violations = 0;
};

struct IdentityRunConfig {
    unsigned width = 4;
    bool exhaustive = true;
    std::uint64_t samples = 0;  // per suite, random mode
    std::uint64_t seed = 0;
    // run only this suite when set
    std::optional<std::string> only_suite;
};

// Suites, in run order:
//   carry-parity-of-sum        p(a+b) == p(a)^p(b)^p(cv), with cv recomputed
//                              from the bit-level carry recurrence
//   qr-output-parity           p(outputs) == p(b)^p(c)^beta on clean traces
//   qr-word-parities           the four closed-form word parities hold
//   block-parity-fold          folding the block parity into the prediction
//                              leaves p(a)^p(d)^beta
//   group-prediction-equivalence  sequential network == closed forms (all
//                              256 bit assignments; always exhaustive)
//   checker-false-positives    neither checker fires on clean traces
std::vector<std::string> identity_suite_names();

// Runs the configured suites. Exhaustive mode enumerates all operand pairs
// (width <= 13) or input tuples (width <= 6); beyond that it throws
// std::invalid_argument naming the infeasible suite.
std::vector<SuiteResult> run_identity_suites(const IdentityRunConfig& config);

}  // namespace parqr
