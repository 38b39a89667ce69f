// Independent reference implementations used only by tests. Everything here
// is written the slow, obvious way — bit loops and byte arrays — so that a
// bug in the library cannot hide behind shared code.
#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace oracle {

// --- bit-level reference arithmetic -------------------------------------

// Parity by bit loop (no popcount).
inline unsigned parity_loop(std::uint64_t x) {
    unsigned p = 0;
    while (x) {
        p ^= x & 1u;
        x >>= 1;
    }
    return p;
}

struct RippleAdd {
    std::uint64_t sum;
    std::uint64_t carry_in;  // bit i = carry into position i (bit 0 is 0)
};

// Schoolbook ripple-carry adder over w bits. Carry into bit 0 is zero;
// carry into bit i+1 is majority(a_i, b_i, c_i), written in and/or/xor
// form so it mirrors a gate-level full adder.
inline RippleAdd ripple_add(std::uint64_t a, std::uint64_t b, unsigned w) {
    std::uint64_t sum = 0, carries = 0;
    unsigned c = 0;
    for (unsigned i = 0; i < w; ++i) {
        const unsigned ai = (a >> i) & 1u;
        const unsigned bi = (b >> i) & 1u;
        carries |= std::uint64_t{c} << i;
        sum |= std::uint64_t{(ai ^ bi ^ c) & 1u} << i;
        c = (ai & bi) | ((ai ^ bi) & c);
    }
    return {sum, carries};
}

// Rotate-left over w bits, bit by bit.
inline std::uint64_t rotl_loop(std::uint64_t x, unsigned r, unsigned w) {
    r %= w;
    std::uint64_t out = 0;
    for (unsigned i = 0; i < w; ++i) {
        const unsigned bit = (x >> i) & 1u;
        out |= std::uint64_t{bit} << ((i + r) % w);
    }
    return out;
}

// --- reference ChaCha -----------------------------------------------------
//
// Written directly from the published definition: 4x4 state of 32-bit
// words, column rounds alternating with diagonal rounds, feed-forward,
// little-endian serialization. Supports both nonce layouts and any even
// round count.

using State = std::array<std::uint32_t, 16>;

inline void qr(State& s, int a, int b, int c, int d) {
    auto rl = [](std::uint32_t x, int r) {
        return static_cast<std::uint32_t>((x << r) | (x >> (32 - r)));
    };
    s[a] += s[b]; s[d] ^= s[a]; s[d] = rl(s[d], 16);
    s[c] += s[d]; s[b] ^= s[c]; s[b] = rl(s[b], 12);
    s[a] += s[b]; s[d] ^= s[a]; s[d] = rl(s[d], 8);
    s[c] += s[d]; s[b] ^= s[c]; s[b] = rl(s[b], 7);
}

enum class Layout { original_64_64, ietf_96_32 };

inline std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

inline State init_state(const std::array<std::uint8_t, 32>& key,
                        const std::vector<std::uint8_t>& nonce,
                        std::uint64_t counter, Layout layout) {
    State s{};
    s[0] = 0x61707865u; s[1] = 0x3320646Eu; s[2] = 0x79622D32u; s[3] = 0x6B206574u;
    for (int i = 0; i < 8; ++i) s[4 + i] = le32(key.data() + 4 * i);
    if (layout == Layout::original_64_64) {
        s[12] = static_cast<std::uint32_t>(counter);
        s[13] = static_cast<std::uint32_t>(counter >> 32);
        s[14] = le32(nonce.data());
        s[15] = le32(nonce.data() + 4);
    } else {
        s[12] = static_cast<std::uint32_t>(counter);
        s[13] = le32(nonce.data());
        s[14] = le32(nonce.data() + 4);
        s[15] = le32(nonce.data() + 8);
    }
    return s;
}

inline std::array<std::uint8_t, 64> block(const std::array<std::uint8_t, 32>& key,
                                          const std::vector<std::uint8_t>& nonce,
                                          std::uint64_t counter, int rounds,
                                          Layout layout) {
    const State v = init_state(key, nonce, counter, layout);
    State s = v;
    for (int r = 0; r < rounds / 2; ++r) {
        qr(s, 0, 4, 8, 12);
        qr(s, 1, 5, 9, 13);
        qr(s, 2, 6, 10, 14);
        qr(s, 3, 7, 11, 15);
        qr(s, 0, 5, 10, 15);
        qr(s, 1, 6, 11, 12);
        qr(s, 2, 7, 8, 13);
        qr(s, 3, 4, 9, 14);
    }
    std::array<std::uint8_t, 64> out{};
    for (int i = 0; i < 16; ++i) {
        const std::uint32_t word = s[i] + v[i];
        out[4 * i + 0] = static_cast<std::uint8_t>(word);
        out[4 * i + 1] = static_cast<std::uint8_t>(word >> 8);
        out[4 * i + 2] = static_cast<std::uint8_t>(word >> 16);
        out[4 * i + 3] = static_cast<std::uint8_t>(word >> 24);
    }
    return out;
}

inline std::vector<std::uint8_t> encrypt(const std::array<std::uint8_t, 32>& key,
                                         const std::vector<std::uint8_t>& nonce,
                                         std::uint64_t counter, int rounds,
                                         Layout layout,
                                         const std::vector<std::uint8_t>& data) {
    std::vector<std::uint8_t> out(data.size());
    for (std::size_t off = 0; off < data.size(); off += 64) {
        const auto ks = block(key, nonce, counter + off / 64, rounds, layout);
        const std::size_t n = std::min<std::size_t>(64, data.size() - off);
        for (std::size_t i = 0; i < n; ++i) out[off + i] = data[off + i] ^ ks[i];
    }
    return out;
}

// --- deterministic test RNG ------------------------------------------------

// splitmix64: tiny, seedable, good enough for test inputs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace oracle
