#include "parqr/identities.hpp"

#include <bit>
#include <stdexcept>

#include "parqr/ced.hpp"
#include "parqr/quarterround.hpp"
#include "parqr/word.hpp"

namespace parqr {
namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Carry into each bit position of a ripple-carry addition, from the
// full-adder recurrence. Deliberately independent of add_traced's
// a^b^sum shortcut; the carry suite checks the two against each other.
std::uint64_t ripple_carries(std::uint64_t a, std::uint64_t b, unsigned w) {
    std::uint64_t cv = 0;
    unsigned carry = 0;
    for (unsigned i = 0; i < w; ++i) {
        cv |= static_cast<std::uint64_t>(carry) << i;
        const unsigned ai = (a >> i) & 1u;
        const unsigned bi = (b >> i) & 1u;
        carry = (ai & bi) | ((ai ^ bi) & carry);
    }
    return cv;
}

detail::RawTrace clean_qr(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d, unsigned w) {
    const std::uint64_t m = Word::mask_for(w);
    const unsigned rot[4] = {16 % w, 12 % w, 8 % w, 7 % w};
    static constexpr std::uint64_t kNoFaults[20] = {};
    return detail::qr_kernel(a, b, c, d, w, m, rot, kNoFaults);
}

struct Counter {
    std::uint64_t evaluations = 0;
    std::uint64_t violations = 0;
    void expect(bool ok) {
        ++evaluations;
        violations += !ok;
    }
};

std::uint64_t draw_seed(std::uint64_t seed, unsigned suite_ordinal) {
    return seed ^ (static_cast<std::uint64_t>(suite_ordinal) + 1) *
                      0x9E3779B97F4A7C15ull;
}

// Feeds every (a, b) pair (exhaustive) or `samples` drawn pairs to fn.
template <typename Fn>
void each_pair(const IdentityRunConfig& cfg, unsigned ordinal, Fn&& fn) {
    const std::uint64_t m = Word::mask_for(cfg.width);
    if (cfg.exhaustive) {
        const std::uint64_t n = std::uint64_t{1} << cfg.width;
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b) fn(a, b);
    } else {
        std::uint64_t state = draw_seed(cfg.seed, ordinal);
        for (std::uint64_t i = 0; i < cfg.samples; ++i) {
            const std::uint64_t a = splitmix64(state) & m;
            const std::uint64_t b = splitmix64(state) & m;
            fn(a, b);
        }
    }
}

// Feeds every (a, b, c, d) tuple (exhaustive) or `samples` drawn tuples to fn.
template <typename Fn>
void each_tuple(const IdentityRunConfig& cfg, unsigned ordinal, Fn&& fn) {
    const std::uint64_t m = Word::mask_for(cfg.width);
    if (cfg.exhaustive) {
        const std::uint64_t n = std::uint64_t{1} << cfg.width;
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                for (std::uint64_t c = 0; c < n; ++c)
                    for (std::uint64_t d = 0; d < n; ++d) fn(a, b, c, d);
    } else {
        std::uint64_t state = draw_seed(cfg.seed, ordinal);
        for (std::uint64_t i = 0; i < cfg.samples; ++i) {
            const std::uint64_t a = splitmix64(state) & m;
            const std::uint64_t b = splitmix64(state) & m;
            const std::uint64_t c = splitmix64(state) & m;
            const std::uint64_t d = splitmix64(state) & m;
            fn(a, b, c, d);
        }
    }
}

using detail::par64;

SuiteResult carry_parity_suite(const IdentityRunConfig& cfg, unsigned ordinal) {
    Counter n;
    const unsigned w = cfg.width;
    each_pair(cfg, ordinal, [&](std::uint64_t av, std::uint64_t bv) {
        const AddResult res = add_traced(Word(av, w), Word(bv, w));
        const std::uint64_t cv = ripple_carries(av, bv, w);
        n.expect(res.carry_vector.value() == cv);
        n.expect(parity(res.sum) ==
                 (par64(av) ^ par64(bv) ^ par64(cv)));
    });
    return {"carry-parity-of-sum", cfg.exhaustive ? "exhaustive" : "random",
            n.evaluations, n.violations};
}

SuiteResult output_parity_suite(const IdentityRunConfig& cfg, unsigned ordinal) {
    Counter n;
    const unsigned w = cfg.width;
    each_tuple(cfg, ordinal,
               [&](std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d) {
                   const detail::RawTrace t = clean_qr(a, b, c, d, w);
                   const Bit observed =
                       par64(t.a_out ^ t.b_out ^ t.c_out ^ t.d_out);
                   n.expect(observed == (par64(b) ^ par64(c) ^ t.beta));
               });
    return {"qr-output-parity", cfg.exhaustive ? "exhaustive" : "random",
            n.evaluations, n.violations};
}

SuiteResult word_parities_suite(const IdentityRunConfig& cfg, unsigned ordinal) {
    Counter n;
    const unsigned w = cfg.width;
    each_tuple(cfg, ordinal,
               [&](std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d) {
                   const detail::RawTrace t = clean_qr(a, b, c, d, w);
                   const GroupParities g = closed_form_parities(
                       par64(a), par64(b), par64(c), par64(d), t.alpha, t.beta,
                       t.gamma, t.delta);
                   n.expect(g.pa == par64(t.a_out));
                   n.expect(g.pb == par64(t.b_out));
                   n.expect(g.pc == par64(t.c_out));
                   n.expect(g.pd == par64(t.d_out));
               });
    return {"qr-word-parities", cfg.exhaustive ? "exhaustive" : "random",
            n.evaluations, n.violations};
}

SuiteResult parity_fold_suite(const IdentityRunConfig& cfg, unsigned ordinal) {
    Counter n;
    const unsigned w = cfg.width;
    each_tuple(cfg, ordinal,
               [&](std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d) {
                   const detail::RawTrace t = clean_qr(a, b, c, d, w);
                   const Bit p_block = par64(a ^ b ^ c ^ d);
                   // folding p(a) and p(d) back into the block parity must
                   // leave the p(b) ^ p(c) ^ beta prediction
                   const Bit folded = static_cast<Bit>(p_block ^ par64(t.a) ^
                                                       par64(t.d) ^ t.beta);
                   n.expect(folded == (par64(t.b) ^ par64(t.c) ^ t.beta));
               });
    return {"block-parity-fold", cfg.exhaustive ? "exhaustive" : "random",
            n.evaluations, n.violations};
}

SuiteResult group_equivalence_suite() {
    // 8 single-bit arguments: all 256 assignments, always exhaustive.
    Counter n;
    for (unsigned bits = 0; bits < 256; ++bits) {
        const auto bit = [bits](unsigned i) {
            return static_cast<Bit>((bits >> i) & 1u);
        };
        const GroupParities seq = gbpp(bit(0), bit(1), bit(2), bit(3), bit(4),
                                       bit(5), bit(6), bit(7));
        const GroupParities closed = closed_form_parities(
            bit(0), bit(1), bit(2), bit(3), bit(4), bit(5), bit(6), bit(7));
        n.expect(seq == closed);
    }
    return {"group-prediction-equivalence", "exhaustive", n.evaluations,
            n.violations};
}

SuiteResult false_positive_suite(const IdentityRunConfig& cfg, unsigned ordinal) {
    Counter n;
    const unsigned w = cfg.width;
    each_tuple(cfg, ordinal,
               [&](std::uint64_t a, std::uint64_t b, std::uint64_t c,
                   std::uint64_t d) {
                   const detail::RawTrace t = clean_qr(a, b, c, d, w);
                   const Bit pa = par64(a), pb = par64(b), pc = par64(c),
                             pd = par64(d);
                   n.expect(!detail::raw_classic_detects(
                       t, static_cast<Bit>(pa ^ pb ^ pc ^ pd)));
                   n.expect(!detail::raw_gbpp_detects(t, pa, pb, pc, pd));
               });
    return {"checker-false-positives", cfg.exhaustive ? "exhaustive" : "random",
            n.evaluations, n.violations};
}

// Widths above these make the exhaustive enumerations infeasible.
constexpr unsigned kPairCap = 13;   // 2^(2w) operand pairs
constexpr unsigned kTupleCap = 6;   // 2^(4w) input tuples

enum class Domain { pairs, tuples, fixed };

struct SuiteEntry {
    const char* name;
    Domain domain;
};

constexpr SuiteEntry kSuites[] = {
    {"carry-parity-of-sum", Domain::pairs},
    {"qr-output-parity", Domain::tuples},
    {"qr-word-parities", Domain::tuples},
    {"block-parity-fold", Domain::tuples},
    {"group-prediction-equivalence", Domain::fixed},
    {"checker-false-positives", Domain::tuples},
};

}  // namespace

std::vector<std::string> identity_suite_names() {
    std::vector<std::string> names;
    for (const SuiteEntry& s : kSuites) names.emplace_back(s.name);
    return names;
}

std::vector<SuiteResult> run_identity_suites(const IdentityRunConfig& cfg) {
    if (cfg.width < Word::kMinWidth || cfg.width > Word::kMaxWidth)
        throw std::invalid_argument("identity suites: width must be in [2,64]");
    if (!cfg.exhaustive && cfg.samples == 0)
        throw std::invalid_argument("identity suites: random mode needs samples >= 1");

    std::vector<unsigned> selected;
    for (unsigned i = 0; i < std::size(kSuites); ++i) {
        if (cfg.only_suite && *cfg.only_suite != kSuites[i].name) continue;
        selected.push_back(i);
    }
    if (selected.empty())
        throw std::invalid_argument("identity suites: unknown suite '" +
                                    *cfg.only_suite + "'");

    for (unsigned i : selected) {
        if (!cfg.exhaustive || kSuites[i].domain == Domain::fixed) continue;
        const unsigned cap = kSuites[i].domain == Domain::pairs ? kPairCap : kTupleCap;
        if (cfg.width > cap)
            throw std::invalid_argument(
                std::string("identity suites: '") + kSuites[i].name +
                "' cannot run exhaustively at width " + std::to_string(cfg.width) +
                " (cap " + std::to_string(cap) + ")");
    }

    std::vector<SuiteResult> results;
    for (unsigned i : selected) {
        switch (i) {
            case 0: results.push_back(carry_parity_suite(cfg, i)); break;
            case 1: results.push_back(output_parity_suite(cfg, i)); break;
            case 2: results.push_back(word_parities_suite(cfg, i)); break;
            case 3: results.push_back(parity_fold_suite(cfg, i)); break;
            case 4: results.push_back(group_equivalence_suite()); break;
            case 5: results.push_back(false_positive_suite(cfg, i)); break;
        }
    }
    return results;
}

}  // namespace parqr
