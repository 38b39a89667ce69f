#include "parqr/fault.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace parqr {

namespace {

using detail::par64;

constexpr std::uint64_t kMaxExhaustiveTrials = 1ull << 31;

const char* kPolicyNames[] = {"odd-exhaustive", "odd-random", "single-bit",
                              "even-random"};

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stateless per-trial stream: every trial's randomness depends only on
// (seed, signal, trial index), so worker partitioning cannot change it.
std::uint64_t trial_state(std::uint64_t seed, unsigned signal_ordinal, std::uint64_t t) {
    std::uint64_t s = seed;
    s ^= (signal_ordinal + 1) * 0x9E3779B97F4A7C15ull;
    s ^= (t + 1) * 0xBF58476D1CE4E5B9ull;
    splitmix(s);  // decorrelate the seams
    return s;
}

// j-th odd-weight mask of `bits` bits, for j in [0, 2^(bits-1)): the low
// bit is the parity fix-up of the remaining bits.
std::uint64_t nth_odd_mask(std::uint64_t j, unsigned bits) {
    (void)bits;
    return (j << 1) | ((std::popcount(j) & 1ull) ^ 1ull);
}

struct Lanes {
    std::array<std::uint64_t, 4> v{};
    unsigned weight() const {
        return static_cast<unsigned>(std::popcount(v[0]) + std::popcount(v[1]) +
                                     std::popcount(v[2]) + std::popcount(v[3]));
    }
};

Lanes lanes_exhaustive(SignalId sig, std::uint64_t mask_idx, unsigned w,
                       std::uint64_t m) {
    Lanes l;
    if (is_tap(sig)) {
        l.v[0] = 1;
    } else if (is_input_block(sig)) {
        const std::uint64_t packed = nth_odd_mask(mask_idx, 4 * w);
        for (unsigned i = 0; i < 4; ++i) l.v[i] = (packed >> (i * w)) & m;
    } else {
        l.v[0] = nth_odd_mask(mask_idx, w);
    }
    return l;
}

Lanes lanes_random(ErrorPolicy policy, SignalId sig, std::uint64_t& st, unsigned w,
                   std::uint64_t m) {
    Lanes l;
    if (is_tap(sig)) {
        l.v[0] = 1;  // the only odd-weight error on a 1-bit wire
        return l;
    }
    switch (policy) {
        case ErrorPolicy::odd_random:
            if (is_input_block(sig)) {
                unsigned total = 0;
                for (auto& lane : l.v) {
                    lane = splitmix(st) & m;
                    total += static_cast<unsigned>(std::popcount(lane));
                }
                if ((total & 1) == 0) l.v[0] ^= 1;
            } else {
                l.v[0] = splitmix(st) & m;
                if ((std::popcount(l.v[0]) & 1) == 0) l.v[0] ^= 1;
            }
            break;
        case ErrorPolicy::single_bit: {
            const unsigned bits = is_input_block(sig) ? 4 * w : w;
            const unsigned bit = static_cast<unsigned>(splitmix(st) % bits);
            l.v[bit / w] = 1ull << (bit % w);
            break;
        }
        case ErrorPolicy::even_random:
            if (is_input_block(sig)) {
                unsigned total = 0;
                for (auto& lane : l.v) {
                    lane = splitmix(st) & m;
                    total += static_cast<unsigned>(std::popcount(lane));
                }
                if (total & 1) l.v[0] ^= 1;
                if (l.weight() == 0) l.v[0] = 0x3;
            } else {
                l.v[0] = splitmix(st) & m;
                if (std::popcount(l.v[0]) & 1) l.v[0] ^= 1;
                if (l.v[0] == 0) l.v[0] = 0x3;
            }
            break;
        case ErrorPolicy::odd_exhaustive:
            throw std::logic_error("exhaustive masks drawn through the random path");
    }
    return l;
}

void apply_lanes(std::uint64_t mk[kWireCount], SignalId sig, const Lanes& l) {
    if (is_input_block(sig)) {
        for (unsigned i = 0; i < 4; ++i) mk[i] = l.v[i];
    } else {
        mk[static_cast<unsigned>(sig)] = l.v[0];
    }
}

void clear_lanes(std::uint64_t mk[kWireCount], SignalId sig) {
    if (is_input_block(sig)) {
        mk[0] = mk[1] = mk[2] = mk[3] = 0;
    } else {
        mk[static_cast<unsigned>(sig)] = 0;
    }
}

std::uint64_t mask_count_exhaustive(SignalId sig, unsigned w) {
    if (is_tap(sig)) return 1;
    const unsigned bits = is_input_block(sig) ? 4 * w : w;
    return 1ull << (bits - 1);
}

std::uint64_t total_trials(const CampaignConfig& cfg, SignalId sig) {
    if (cfg.inputs == InputPolicy::random) return cfg.samples;
    const std::uint64_t n_inputs = 1ull << (4 * cfg.width);
    return n_inputs * mask_count_exhaustive(sig, cfg.width);
}

struct PartialRow {
    std::uint64_t injected = 0, detected = 0;
    std::optional<MissWitness> miss;
};

bool detects(CedScheme scheme, const detail::RawTrace& t, Bit pa, Bit pb, Bit pc,
             Bit pd) {
    if (scheme == CedScheme::classic)
        return detail::raw_classic_detects(t, static_cast<Bit>(pa ^ pb ^ pc ^ pd));
    return detail::raw_gbpp_detects(t, pa, pb, pc, pd);
}

// Evaluates trials [t0, t1) of one signal's sweep into `out`.
void eval_signal_range(const CampaignConfig& cfg, SignalId sig, std::uint64_t t0,
                       std::uint64_t t1, PartialRow& out) {
    const unsigned w = cfg.width;
    const std::uint64_t m = Word::mask_for(w);
    const unsigned rot[4] = {16 % w, 12 % w, 8 % w, 7 % w};
    const unsigned ordinal = static_cast<unsigned>(sig);
    std::uint64_t mk[kWireCount] = {};

    auto run_one = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d, const Lanes& lanes, std::uint64_t t) {
        const detail::RawTrace tr = detail::qr_kernel(a, b, c, d, w, m, rot, mk);
        const bool det =
            detects(cfg.scheme, tr, par64(a), par64(b), par64(c), par64(d));
        ++out.injected;
        out.detected += det;
        if (!det && !out.miss)
            out.miss = MissWitness{a, b, c, d, lanes.v, t};
    };

    if (cfg.inputs == InputPolicy::exhaustive) {
        const std::uint64_t n_inputs = 1ull << (4 * w);
        std::uint64_t t = t0;
        while (t < t1) {
            const std::uint64_t mask_idx = t / n_inputs;
            const std::uint64_t run_end = std::min(t1, (mask_idx + 1) * n_inputs);
            const Lanes lanes = lanes_exhaustive(sig, mask_idx, w, m);
            apply_lanes(mk, sig, lanes);
            std::uint64_t input = t - mask_idx * n_inputs;
            for (; t < run_end; ++t, ++input) {
                const std::uint64_t a = input & m;
                const std::uint64_t b = (input >> w) & m;
                const std::uint64_t c = (input >> (2 * w)) & m;
                const std::uint64_t d = (input >> (3 * w)) & m;
                run_one(a, b, c, d, lanes, t);
            }
            clear_lanes(mk, sig);
        }
    } else {
        for (std::uint64_t t = t0; t < t1; ++t) {
            std::uint64_t st = trial_state(cfg.seed, ordinal, t);
            const std::uint64_t a = splitmix(st) & m;
            const std::uint64_t b = splitmix(st) & m;
            const std::uint64_t c = splitmix(st) & m;
            const std::uint64_t d = splitmix(st) & m;
            const Lanes lanes = lanes_random(cfg.errors, sig, st, w, m);
            apply_lanes(mk, sig, lanes);
            run_one(a, b, c, d, lanes, t);
            clear_lanes(mk, sig);
        }
    }
}

void validate_config(const CampaignConfig& cfg) {
    if (cfg.width < Word::kMinWidth || cfg.width > Word::kMaxWidth)
        throw std::invalid_argument("campaign width must be in [2,64]");
    if (cfg.samples > 10'000'000'000ull)
        throw std::invalid_argument("samples cap is 1e10 per signal");
    if (cfg.signals.empty())
        throw std::invalid_argument("campaign needs at least one signal");
    bool seen[kSignalCount] = {};
    for (SignalId s : cfg.signals) {
        const unsigned i = static_cast<unsigned>(s);
        if (i >= kSignalCount) throw std::invalid_argument("bad signal id");
        if (seen[i])
            throw std::invalid_argument(std::string("duplicate signal ") + signal_name(s));
        seen[i] = true;
        if (cfg.errors == ErrorPolicy::even_random && is_tap(s))
            throw std::invalid_argument(
                std::string("signal ") + signal_name(s) +
                ": a 1-bit tap has no even-weight nonzero error");
    }
    const bool exhaustive_policy = cfg.errors == ErrorPolicy::odd_exhaustive;
    if (exhaustive_policy != (cfg.inputs == InputPolicy::exhaustive))
        throw std::invalid_argument(
            "odd-exhaustive pairs with exhaustive inputs; randomized error policies "
            "pair with random inputs");
    if (cfg.inputs == InputPolicy::random && cfg.samples == 0)
        throw std::invalid_argument("random campaigns need samples >= 1");
    if (cfg.inputs == InputPolicy::exhaustive) {
        if (4 * cfg.width > 32)
            throw std::invalid_argument("exhaustive campaigns support width <= 8");
        for (SignalId s : cfg.signals)
            if (total_trials(cfg, s) > kMaxExhaustiveTrials)
                throw std::invalid_argument(
                    std::string("signal ") + signal_name(s) + " needs " +
                    std::to_string(total_trials(cfg, s)) +
                    " exhaustive trials; cap is 2^31 — use a randomized policy");
    }
}

void scan_carry_errors(unsigned w, std::optional<CarryErrorWitness>& zero,
              std::optional<CarryErrorWitness>& changed) {
    const std::uint64_t m = Word::mask_for(w);
    for (std::uint64_t e = 1; e <= m; ++e) {
        for (std::uint64_t a = 0; a <= m; ++a) {
            for (std::uint64_t b = 0; b <= m; ++b) {
                const std::uint64_t cv_clean = a ^ b ^ ((a + b) & m);
                const std::uint64_t at = a ^ e;
                const std::uint64_t cv_faulty = at ^ b ^ ((at + b) & m);
                const std::uint64_t ec = cv_clean ^ cv_faulty;
                const unsigned we = static_cast<unsigned>(std::popcount(e));
                const unsigned wec = static_cast<unsigned>(std::popcount(ec));
                if (!zero && wec == 0)
                    zero = CarryErrorWitness{a, b, e, ec, we, wec};
                if (!changed && wec != 0 && wec != we)
                    changed = CarryErrorWitness{a, b, e, ec, we, wec};
                if (zero && changed) return;
            }
        }
    }
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%" PRIx64, v);
    return buf;
}

}  // namespace

const char* error_policy_name(ErrorPolicy p) {
    return kPolicyNames[static_cast<unsigned>(p)];
}

std::optional<ErrorPolicy> parse_error_policy(std::string_view name) {
    for (unsigned i = 0; i < 4; ++i)
        if (name == kPolicyNames[i]) return static_cast<ErrorPolicy>(i);
    return std::nullopt;
}

const char* input_policy_name(InputPolicy p) {
    return p == InputPolicy::exhaustive ? "exhaustive" : "random";
}

const char* expectation_name(Expectation e) {
    switch (e) {
        case Expectation::covered: return "covered";
        case Expectation::uncovered: return "uncovered";
        default: return "unspecified";
    }
}

Expectation expected_coverage(CedScheme scheme, SignalId s) {
    if (scheme == CedScheme::classic) {
        switch (s) {
            case SignalId::A: case SignalId::B: case SignalId::C: case SignalId::D:
            case SignalId::INPUT_BLOCK:
            case SignalId::B0: case SignalId::C0: case SignalId::B1:
            case SignalId::B2: case SignalId::D2:
            case SignalId::B_OUT: case SignalId::D_OUT:
                return Expectation::covered;
            case SignalId::A0: case SignalId::D0: case SignalId::D1:
            case SignalId::A_OUT: case SignalId::C_OUT:
                return Expectation::uncovered;
            default:  // the four taps: no documented claim for this scheme
                return Expectation::unspecified;
        }
    }
    // group-based scheme
    switch (s) {
        case SignalId::A0: case SignalId::B0: case SignalId::B1: case SignalId::B2:
        case SignalId::C0: case SignalId::D0: case SignalId::D1: case SignalId::D2:
        case SignalId::ALPHA: case SignalId::BETA: case SignalId::GAMMA:
        case SignalId::DELTA:
        case SignalId::A_OUT: case SignalId::B_OUT: case SignalId::C_OUT:
        case SignalId::D_OUT:
            return Expectation::covered;
        default:  // raw inputs: detectability depends on where parities come from
            return Expectation::unspecified;
    }
}

std::vector<SignalId> all_signals() {
    std::vector<SignalId> v;
    for (unsigned i = 0; i < kSignalCount; ++i) v.push_back(static_cast<SignalId>(i));
    return v;
}

std::vector<SignalId> campaign_signals(ErrorPolicy policy) {
    std::vector<SignalId> v;
    for (unsigned i = 0; i < kSignalCount; ++i) {
        const auto s = static_cast<SignalId>(i);
        if (policy == ErrorPolicy::even_random && is_tap(s)) continue;
        v.push_back(s);
    }
    return v;
}

CoverageReport run_campaign(const CampaignConfig& config) {
    validate_config(config);
    const unsigned jobs = std::clamp(config.jobs, 1u, 64u);
    const std::size_t n_signals = config.signals.size();

    std::vector<std::vector<PartialRow>> partials(jobs,
                                                  std::vector<PartialRow>(n_signals));
    auto work = [&](unsigned k) {
        for (std::size_t si = 0; si < n_signals; ++si) {
            const SignalId sig = config.signals[si];
            const std::uint64_t total = total_trials(config, sig);
            const std::uint64_t lo = total * k / jobs;
            const std::uint64_t hi = total * (k + 1) / jobs;
            if (lo < hi) eval_signal_range(config, sig, lo, hi, partials[k][si]);
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work, k);
        for (auto& th : pool) th.join();
    }

    CoverageReport report;
    report.config = config;
    const bool even_class = config.errors == ErrorPolicy::even_random;
    for (std::size_t si = 0; si < n_signals; ++si) {
        CoverageRow row;
        row.signal = config.signals[si];
        row.expected = expected_coverage(config.scheme, row.signal);
        for (unsigned k = 0; k < jobs; ++k) {
            const PartialRow& p = partials[k][si];
            row.trials += p.injected;
            if (even_class) {
                row.injected_even += p.injected;
                row.detected_even += p.detected;
            } else {
                row.injected_odd += p.injected;
                row.detected_odd += p.detected;
            }
            if (p.miss && (!row.first_miss || p.miss->trial_index < row.first_miss->trial_index))
                row.first_miss = p.miss;
        }
        report.rows.push_back(std::move(row));
    }
    if (config.width <= 8)
        scan_carry_errors(config.width, report.carry_error_zero, report.carry_error_weight_changed);
    return report;
}

Classification classify_report(const CoverageReport& report) {
    const CedScheme scheme = report.config.scheme;
    Classification cls;
    std::vector<std::string> missing;
    for (SignalId s : all_signals()) {
        const Expectation e = expected_coverage(scheme, s);
        if (e == Expectation::unspecified) continue;
        const CoverageRow* row = nullptr;
        for (const CoverageRow& r : report.rows)
            if (r.signal == s) row = &r;
        if (!row) {
            missing.push_back(signal_name(s));
            continue;
        }
        if (row->injected_odd == 0) {
            cls.failures.push_back(std::string(signal_name(s)) +
                                   ": no odd-weight trials to grade");
            continue;
        }
        if (e == Expectation::covered && row->detected_odd != row->injected_odd)
            cls.failures.push_back(std::string(signal_name(s)) +
                                   ": expected full odd-error detection, measured " +
                                   std::to_string(row->detected_odd) + "/" +
                                   std::to_string(row->injected_odd));
        if (e == Expectation::uncovered && row->detected_odd == row->injected_odd)
            cls.failures.push_back(std::string(signal_name(s)) +
                                   ": expected at least one odd-error miss, measured "
                                   "full detection");
    }
    if (!missing.empty()) {
        std::string msg = "report lacks rows for graded signals:";
        for (const auto& m : missing) msg += " " + m;
        throw std::invalid_argument(msg);
    }
    cls.pass = cls.failures.empty();
    return cls;
}

std::optional<MissWitness> find_counterexample(unsigned width, CedScheme scheme,
                                               SignalId signal) {
    CampaignConfig cfg;
    cfg.width = width;
    cfg.scheme = scheme;
    cfg.signals = {signal};
    cfg.errors = ErrorPolicy::odd_exhaustive;
    cfg.inputs = InputPolicy::exhaustive;
    if (width > 8) throw std::invalid_argument("counterexample search needs width <= 8");
    validate_config(cfg);

    const unsigned w = width;
    const std::uint64_t m = Word::mask_for(w);
    const unsigned rot[4] = {16 % w, 12 % w, 8 % w, 7 % w};
    const std::uint64_t n_inputs = 1ull << (4 * w);
    const std::uint64_t n_masks = mask_count_exhaustive(signal, w);
    std::uint64_t mk[kWireCount] = {};
    std::uint64_t t = 0;
    for (std::uint64_t mask_idx = 0; mask_idx < n_masks; ++mask_idx) {
        const Lanes lanes = lanes_exhaustive(signal, mask_idx, w, m);
        apply_lanes(mk, signal, lanes);
        for (std::uint64_t input = 0; input < n_inputs; ++input, ++t) {
            const std::uint64_t a = input & m;
            const std::uint64_t b = (input >> w) & m;
            const std::uint64_t c = (input >> (2 * w)) & m;
            const std::uint64_t d = (input >> (3 * w)) & m;
            const detail::RawTrace tr = detail::qr_kernel(a, b, c, d, w, m, rot, mk);
            if (!detects(scheme, tr, par64(a), par64(b), par64(c), par64(d)))
                return MissWitness{a, b, c, d, lanes.v, t};
        }
        clear_lanes(mk, signal);
    }
    return std::nullopt;
}

namespace {

nlohmann::json witness_json(const MissWitness& w) {
    nlohmann::json j;
    j["a"] = hex64(w.a);
    j["b"] = hex64(w.b);
    j["c"] = hex64(w.c);
    j["d"] = hex64(w.d);
    j["mask_lanes"] = {hex64(w.mask_lanes[0]), hex64(w.mask_lanes[1]),
                       hex64(w.mask_lanes[2]), hex64(w.mask_lanes[3])};
    j["trial_index"] = w.trial_index;
    return j;
}

nlohmann::json carry_witness_json(const CarryErrorWitness& w) {
    nlohmann::json j;
    j["a"] = hex64(w.a);
    j["b"] = hex64(w.b);
    j["e"] = hex64(w.e);
    j["e_c"] = hex64(w.e_c);
    j["weight_e"] = w.weight_e;
    j["weight_e_c"] = w.weight_e_c;
    return j;
}

}  // namespace

std::string report_to_json(const CoverageReport& report,
                           const Classification* classification) {
    nlohmann::json j;
    j["schema"] = "coverage-report/1";
    nlohmann::json cfg;
    cfg["width"] = report.config.width;
    cfg["scheme"] = scheme_name(report.config.scheme);
    cfg["errors"] = error_policy_name(report.config.errors);
    cfg["inputs"] = input_policy_name(report.config.inputs);
    cfg["samples"] = report.config.samples;
    cfg["seed"] = report.config.seed;
    nlohmann::json sigs = nlohmann::json::array();
    for (SignalId s : report.config.signals) sigs.push_back(signal_name(s));
    cfg["signals"] = sigs;
    j["config"] = cfg;

    nlohmann::json rows = nlohmann::json::array();
    for (const CoverageRow& r : report.rows) {
        nlohmann::json row;
        row["signal"] = signal_name(r.signal);
        row["expected"] = expectation_name(r.expected);
        row["trials"] = r.trials;
        row["injected_odd"] = r.injected_odd;
        row["detected_odd"] = r.detected_odd;
        row["injected_even"] = r.injected_even;
        row["detected_even"] = r.detected_even;
        if (auto rate = r.detection_rate_odd())
            row["detection_rate_odd"] = *rate;
        else
            row["detection_rate_odd"] = nullptr;
        if (auto rate = r.detection_rate_even())
            row["detection_rate_even"] = *rate;
        else
            row["detection_rate_even"] = nullptr;
        row["miss_witness"] = r.first_miss ? witness_json(*r.first_miss)
                                           : nlohmann::json(nullptr);
        rows.push_back(row);
    }
    j["rows"] = rows;

    if (report.carry_error_zero || report.carry_error_weight_changed) {
        nlohmann::json witnesses;
        witnesses["zero_carry_error"] = report.carry_error_zero
                                      ? carry_witness_json(*report.carry_error_zero)
                                      : nlohmann::json(nullptr);
        witnesses["weight_changed"] = report.carry_error_weight_changed
                                    ? carry_witness_json(*report.carry_error_weight_changed)
                                    : nlohmann::json(nullptr);
        j["carry_error_witnesses"] = witnesses;
    }

    if (classification) {
        nlohmann::json cj;
        cj["pass"] = classification->pass;
        cj["failures"] = classification->failures;
        j["classification"] = cj;
    }
    return j.dump(2) + "\n";
}

std::string report_to_csv(const CoverageReport& report) {
    std::string out =
        "signal,expected,trials,injected_odd,detected_odd,detection_rate_odd,"
        "injected_even,detected_even\n";
    char buf[64];
    for (const CoverageRow& r : report.rows) {
        out += signal_name(r.signal);
        out += ',';
        out += expectation_name(r.expected);
        std::snprintf(buf, sizeof buf, ",%" PRIu64 ",%" PRIu64 ",%" PRIu64, r.trials,
                      r.injected_odd, r.detected_odd);
        out += buf;
        if (auto rate = r.detection_rate_odd()) {
            std::snprintf(buf, sizeof buf, ",%.17g", *rate);
            out += buf;
        } else {
            out += ',';
        }
        std::snprintf(buf, sizeof buf, ",%" PRIu64 ",%" PRIu64 "\n", r.injected_even,
                      r.detected_even);
        out += buf;
    }
    return out;
}

}  // namespace parqr
