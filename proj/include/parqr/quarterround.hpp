// Traced quarterround datapath. Every named wire is exposed, and an error
// mask can be XORed onto any wire at the moment it is produced (before
// fan-out), so corruption propagates naturally through downstream adders.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "parqr/word.hpp"

namespace parqr {

// The 21 named signals of one quarterround. Order matters: it is the wire
// production order and the canonical report order.
enum class SignalId : unsigned {
    A, B, C, D,                      // inputs
    A0, B0, B1, B2, C0, D0, D1, D2,  // intermediates
    ALPHA, BETA, GAMMA, DELTA,       // carry-parity taps (single bits)
    A_OUT, B_OUT, C_OUT, D_OUT,      // outputs
    INPUT_BLOCK,                     // all four inputs as one 4w-bit vector
};

inline constexpr unsigned kSignalCount = 21;
inline constexpr unsigned kWireCount = 20;  // everything except INPUT_BLOCK

constexpr bool is_tap(SignalId s) {
    return s >= SignalId::ALPHA && s <= SignalId::DELTA;
}
constexpr bool is_input_block(SignalId s) { return s == SignalId::INPUT_BLOCK; }
constexpr bool is_word_signal(SignalId s) { return !is_tap(s) && !is_input_block(s); }

const char* signal_name(SignalId s);
std::optional<SignalId> parse_signal(std::string_view name);

// A single injected error: XOR mask applied to one signal.
// Word signals and taps use lanes[0]; INPUT_BLOCK carries one w-bit mask
// per input word in lanes[0..3] (a,b,c,d). Tap masks are 1-bit.
// A zero mask is legal and is a no-op.
struct FaultSpec {
    SignalId signal = SignalId::A;
    std::array<std::uint64_t, 4> lanes{};

    static FaultSpec word(SignalId s, std::uint64_t mask) {
        if (!is_word_signal(s))
            throw std::invalid_argument("FaultSpec::word: signal is not a word wire");
        FaultSpec f;
        f.signal = s;
        f.lanes[0] = mask;
        return f;
    }
    static FaultSpec tap(SignalId s, Bit flip) {
        if (!is_tap(s))
            throw std::invalid_argument("FaultSpec::tap: signal is not a tap");
        FaultSpec f;
        f.signal = s;
        f.lanes[0] = flip & 1u;
        return f;
    }
    static FaultSpec block(std::uint64_t ea, std::uint64_t eb, std::uint64_t ec,
                           std::uint64_t ed) {
        FaultSpec f;
        f.signal = SignalId::INPUT_BLOCK;
        f.lanes = {ea, eb, ec, ed};
        return f;
    }
    // Splits a packed 4w-bit mask (bits [0,w) -> a, [w,2w) -> b, ...) given
    // as two 64-bit halves, low half first.
    static FaultSpec block_packed(std::uint64_t lo, std::uint64_t hi, unsigned width);

    unsigned weight() const {
        return static_cast<unsigned>(std::popcount(lanes[0]) + std::popcount(lanes[1]) +
                                     std::popcount(lanes[2]) + std::popcount(lanes[3]));
    }
};

struct RotationSchedule {
    std::array<unsigned, 4> r{16, 12, 8, 7};
    static constexpr RotationSchedule chacha() { return {}; }
};

// One executed quarterround: every wire value as the datapath saw it
// (post-injection when faults were applied). Taps are the carry parities
// of the four adders, in adder order.
struct QrTrace {
    Word a, b, c, d;
    Word a0, b0, b1, b2, c0, d0, d1, d2;
    Bit alpha = 0, beta = 0, gamma = 0, delta = 0;
    Word a_out, b_out, c_out, d_out;
    std::array<unsigned, 4> rotation_schedule{16, 12, 8, 7};

    unsigned width() const { return a.width(); }
    std::array<Word, 4> outputs() const { return {a_out, b_out, c_out, d_out}; }
    Word wire(SignalId s) const;  // word signals only
    Bit tap(SignalId s) const;    // taps only
};

namespace detail {

// Raw hot-path evaluation on plain integers; the campaign engine calls this
// directly. mk is a 20-entry XOR-mask table indexed by SignalId (taps hold
// 0/1 in their slot); all word masks must already be reduced to the width.
// rot entries must already be reduced mod w.
struct RawTrace {
    std::uint64_t a, b, c, d;
    std::uint64_t a0, b0, b1, b2, c0, d0, d1, d2;
    std::uint64_t a_out, b_out, c_out, d_out;
    Bit alpha, beta, gamma, delta;
};

inline Bit par64(std::uint64_t x) { return static_cast<Bit>(std::popcount(x) & 1); }

inline RawTrace qr_kernel(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d, unsigned w, std::uint64_t m,
                          const unsigned rot[4], const std::uint64_t mk[20]) {
    auto rl = [w, m](std::uint64_t x, unsigned r) -> std::uint64_t {
        return r ? ((x << r) | (x >> (w - r))) & m : x;
    };
    RawTrace t;
    t.a = a ^ mk[0];
    t.b = b ^ mk[1];
    t.c = c ^ mk[2];
    t.d = d ^ mk[3];
    std::uint64_t s = (t.a + t.b) & m;
    t.alpha = static_cast<Bit>((par64(t.a ^ t.b ^ s) ^ mk[12]) & 1);
    t.a0 = s ^ mk[4];
    t.d0 = (t.d ^ t.a0) ^ mk[9];
    t.d1 = rl(t.d0, rot[0]) ^ mk[10];
    s = (t.c + t.d1) & m;
    t.beta = static_cast<Bit>((par64(t.c ^ t.d1 ^ s) ^ mk[13]) & 1);
    t.c0 = s ^ mk[8];
    t.b0 = (t.b ^ t.c0) ^ mk[5];
    t.b1 = rl(t.b0, rot[1]) ^ mk[6];
    s = (t.a0 + t.b1) & m;
    t.gamma = static_cast<Bit>((par64(t.a0 ^ t.b1 ^ s) ^ mk[14]) & 1);
    t.a_out = s ^ mk[16];
    t.d2 = (t.d1 ^ t.a_out) ^ mk[11];
    t.d_out = rl(t.d2, rot[2]) ^ mk[19];
    // the final adder consumes the rotated output word d'
    s = (t.c0 + t.d_out) & m;
    t.delta = static_cast<Bit>((par64(t.c0 ^ t.d_out ^ s) ^ mk[15]) & 1);
    t.c_out = s ^ mk[18];
    t.b2 = (t.b1 ^ t.c_out) ^ mk[7];
    t.b_out = rl(t.b2, rot[3]) ^ mk[17];
    return t;
}

}  // namespace detail

// Runs the 12-step dataflow, applying each fault mask onto its wire as the
// wire is produced. Tap faults flip only the alpha..delta values delivered
// to the predictors, never the datapath carries. Throws on width mismatch,
// duplicate fault signals, masks that do not fit the width, or tap masks
// wider than one bit.
QrTrace quarterround(Word a, Word b, Word c, Word d,
                     RotationSchedule schedule = RotationSchedule::chacha(),
                     std::span<const FaultSpec> faults = {});

// Parity of the concatenated output block (a'||b'||c'||d').
Bit qr_output_parity(const QrTrace& t);

}  // namespace parqr
