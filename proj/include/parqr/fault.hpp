// Fault model and injection campaigns. A campaign sweeps (input, error
// mask) pairs for each requested signal, runs the chosen checker on every
// faulted quarterround with honest pre-corruption input parities, and
// tallies detections per signal. Reports carry the expected coverage
// classification of each signal and are bit-reproducible for a given seed
// and config, independent of worker count.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parqr/ced.hpp"
#include "parqr/quarterround.hpp"

namespace parqr {

enum class ErrorPolicy {
    odd_exhaustive,  // every odd-weight mask x every input tuple (small widths)
    odd_random,      // random odd-weight masks, random inputs
    single_bit,      // single random bit flips, random inputs
    even_random,     // random even-weight nonzero masks (taps excluded)
};

enum class InputPolicy { exhaustive, random };

const char* error_policy_name(ErrorPolicy p);
std::optional<ErrorPolicy> parse_error_policy(std::string_view name);
const char* input_policy_name(InputPolicy p);

struct CampaignConfig {
    unsigned width = 4;
    CedScheme scheme = CedScheme::classic;
    std::vector<SignalId> signals;
    ErrorPolicy errors = ErrorPolicy::odd_exhaustive;
    InputPolicy inputs = InputPolicy::exhaustive;
    std::uint64_t samples = 0;  // trials per signal under random inputs
    std::uint64_t seed = 0;
    unsigned jobs = 1;  // execution detail only; never serialized into reports
};

// How the scheme is expected to behave on odd-weight errors for a signal:
// guaranteed detection, known blind spot, or no documented claim.
enum class Expectation { covered, uncovered, unspecified };
const char* expectation_name(Expectation e);
Expectation expected_coverage(CedScheme scheme, SignalId signal);

std::vector<SignalId> all_signals();
// "all" for a given policy: even_random drops the taps (a 1-bit wire has no
// even-weight nonzero error).
std::vector<SignalId> campaign_signals(ErrorPolicy policy);

struct MissWitness {
    std::uint64_t a = 0, b = 0, c = 0, d = 0;      // pre-injection inputs
    std::array<std::uint64_t, 4> mask_lanes{};     // injected mask
    std::uint64_t trial_index = 0;
};

struct CoverageRow {
    SignalId signal = SignalId::A;
    Expectation expected = Expectation::unspecified;
    std::uint64_t trials = 0;
    std::uint64_t injected_odd = 0, detected_odd = 0;
    std::uint64_t injected_even = 0, detected_even = 0;
    std::optional<MissWitness> first_miss;  // earliest undetected trial, if any

    std::optional<double> detection_rate_odd() const {
        if (injected_odd == 0) return std::nullopt;
        return static_cast<double>(detected_odd) / static_cast<double>(injected_odd);
    }
    std::optional<double> detection_rate_even() const {
        if (injected_even == 0) return std::nullopt;
        return static_cast<double>(detected_even) / static_cast<double>(injected_even);
    }
};

// Demonstrations that a mask on one adder operand induces a carry-vector
// error of unrelated weight: e_c = cv(a^e, b) ^ cv(a, b) can be zero, and
// can have weight different from weight(e).
struct CarryErrorWitness {
    std::uint64_t a = 0, b = 0, e = 0, e_c = 0;
    unsigned weight_e = 0, weight_e_c = 0;
};

struct CoverageReport {
    CampaignConfig config;
    std::vector<CoverageRow> rows;  // in config.signals order
    std::optional<CarryErrorWitness> carry_error_zero;      // weight(e_c) == 0
    std::optional<CarryErrorWitness> carry_error_weight_changed;  // 0 != weight(e_c) != weight(e)
};

// Runs the campaign. Throws std::invalid_argument for empty or duplicate
// signal lists, policy combinations that make no sense (exhaustive inputs
// with randomized masks and vice versa, even-weight errors on taps), or
// exhaustive spaces beyond ~2^31 trials per signal.
CoverageReport run_campaign(const CampaignConfig& config);

struct Classification {
    bool pass = true;
    std::vector<std::string> failures;  // human-readable, one per violated row
};

// Grades a report against the expectation table: covered rows must show
// full odd-error detection, uncovered rows must show at least one odd
// miss. Throws std::invalid_argument if a required row is absent.
Classification classify_report(const CoverageReport& report);

// First undetected odd-weight error for the signal in deterministic scan
// order (exhaustive over inputs and masks; width <= 8), or nothing if the
// scheme catches everything.
std::optional<MissWitness> find_counterexample(unsigned width, CedScheme scheme,
                                               SignalId signal);

// Canonical serializations. JSON is byte-stable for identical reports;
// pass a classification to embed the grading verdict.
std::string report_to_json(const CoverageReport& report,
                           const Classification* classification = nullptr);
std::string report_to_csv(const CoverageReport& report);

}  // namespace parqr
