// The two concurrent error detection schemes for the quarterround:
//  - classic: one predicted parity bit for the whole 4w-bit output block,
//    compared by a single XOR (code-disjoint when p_block comes from
//    upstream of any input corruption);
//  - gbpp: one predicted parity bit per output word, four comparators
//    merged by a 4-input OR.
// Both predictors read the carry-parity taps (and, for classic, the b/c/a/d
// words) straight off the datapath, sharing whatever corruption is present.
#pragma once

#include <cstdint>

#include "parqr/quarterround.hpp"
#include "parqr/word.hpp"

namespace parqr {

enum class CedScheme { classic, gbpp };

const char* scheme_name(CedScheme s);

struct InputParities {
    Bit pa = 0, pb = 0, pc = 0, pd = 0;
    Bit p_block = 0;  // parity of the concatenated input a||b||c||d
    enum class Source { computed_local, supplied_upstream };
    Source source = Source::computed_local;

    // Parities of the trace's own (possibly already corrupted) inputs.
    static InputParities from_trace(const QrTrace& t) {
        return make(parity(t.a), parity(t.b), parity(t.c), parity(t.d),
                    Source::computed_local);
    }
    // Parities of externally held words — e.g. the pre-corruption inputs.
    static InputParities from_words(Word a, Word b, Word c, Word d) {
        return make(parity(a), parity(b), parity(c), parity(d),
                    Source::supplied_upstream);
    }
    static InputParities supplied(Bit pa, Bit pb, Bit pc, Bit pd) {
        return make(pa, pb, pc, pd, Source::supplied_upstream);
    }

private:
    static InputParities make(Bit pa, Bit pb, Bit pc, Bit pd, Source src) {
        InputParities ip;
        ip.pa = pa & 1; ip.pb = pb & 1; ip.pc = pc & 1; ip.pd = pd & 1;
        ip.p_block = ip.pa ^ ip.pb ^ ip.pc ^ ip.pd;
        ip.source = src;
        return ip;
    }
};

struct GroupParities {
    Bit pa = 0, pb = 0, pc = 0, pd = 0;
    friend bool operator==(GroupParities, GroupParities) = default;
};

// Comparator bit layout in CheckVerdict::fired/predicted/observed.
inline constexpr std::uint8_t kCmpSingle = 1u << 0;  // classic's lone comparator
inline constexpr std::uint8_t kCmpA = 1u << 0;       // gbpp per-word comparators
inline constexpr std::uint8_t kCmpB = 1u << 1;
inline constexpr std::uint8_t kCmpC = 1u << 2;
inline constexpr std::uint8_t kCmpD = 1u << 3;

struct CheckVerdict {
    CedScheme scheme = CedScheme::classic;
    bool detected = false;
    std::uint8_t fired = 0;      // which comparators disagreed
    std::uint8_t predicted = 0;  // predicted parity bits, same layout
    std::uint8_t observed = 0;   // observed parity bits, same layout
};

// Predicted parity of the output block from the trace's own b, c and beta:
// p(b) ^ p(c) ^ beta.
Bit predict_qr_parity(const QrTrace& t);

// Sequential per-bit prediction network: eight single-bit updates tracking
// the dataflow, two per adder stage. Returns the four predicted output
// word parities.
constexpr GroupParities gbpp(Bit pa, Bit pb, Bit pc, Bit pd, Bit alpha, Bit beta,
                             Bit gamma, Bit delta) {
    pa = pa ^ pb ^ alpha;   // first adder: parity of a0
    pd = pd ^ pa;           // xor + rotation: parity of d0 = parity of d1
    pc = pc ^ pd ^ beta;    // second adder: parity of c0
    pb = pb ^ pc;           // xor + rotation: parity of b0 = parity of b1
    pa = pa ^ pb ^ gamma;   // third adder: parity of a'
    pd = pd ^ pa;           // xor + rotation: parity of d2 = parity of d'
    pc = pc ^ pd ^ delta;   // fourth adder: parity of c'
    pb = pb ^ pc;           // xor + rotation: parity of b2 = parity of b'
    return {static_cast<Bit>(pa & 1), static_cast<Bit>(pb & 1),
            static_cast<Bit>(pc & 1), static_cast<Bit>(pd & 1)};
}

// Closed-form output-word parities; algebraically the expansion of gbpp().
constexpr GroupParities closed_form_parities(Bit pa, Bit pb, Bit pc, Bit pd, Bit alpha,
                                           Bit beta, Bit gamma, Bit delta) {
    GroupParities g;
    g.pa = (pb ^ pc ^ pd ^ beta ^ gamma) & 1;
    g.pb = (pa ^ pb ^ pc ^ alpha ^ beta ^ gamma ^ delta) & 1;
    g.pc = (pb ^ pd ^ gamma ^ delta) & 1;
    g.pd = (pa ^ pc ^ alpha ^ beta ^ gamma) & 1;
    return g;
}

// Closed forms evaluated on the trace's own input parities and taps.
GroupParities predict_output_parities(const QrTrace& t);

// Single-comparator check: predicted block parity
//   p_hat = ip.p_block ^ p(t.a) ^ p(t.d) ^ t.beta
// (t.a, t.d, beta read off the trace) against the observed output parity.
CheckVerdict check_classic(const QrTrace& t, const InputParities& ip);

// Four-comparator check: gbpp on ip plus the trace's taps, compared with
// the observed parity of each output word; any mismatch detects.
CheckVerdict check_gbpp(const QrTrace& t, const InputParities& ip);

CheckVerdict run_check(CedScheme scheme, const QrTrace& t, const InputParities& ip);

namespace detail {

// Raw-trace fast paths used by the campaign engine; same algebra as the
// public checkers.
inline bool raw_classic_detects(const RawTrace& t, Bit p_block) {
    const Bit predicted =
        static_cast<Bit>(p_block ^ par64(t.a) ^ par64(t.d) ^ t.beta);
    const Bit observed = par64(t.a_out ^ t.b_out ^ t.c_out ^ t.d_out);
    return predicted != observed;
}

inline bool raw_gbpp_detects(const RawTrace& t, Bit pa, Bit pb, Bit pc, Bit pd) {
    const GroupParities g = gbpp(pa, pb, pc, pd, t.alpha, t.beta, t.gamma, t.delta);
    return g.pa != par64(t.a_out) || g.pb != par64(t.b_out) ||
           g.pc != par64(t.c_out) || g.pd != par64(t.d_out);
}

}  // namespace detail

}  // namespace parqr
