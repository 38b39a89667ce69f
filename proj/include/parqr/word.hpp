// Width-parametric binary words and the ARX primitives (xor, modular add
// with carry-vector extraction, rotation) plus the parity function.
#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parqr {

// Single bit, always 0 or 1.
using Bit = std::uint8_t;

// A w-bit binary vector, LSB = bit 0. Value is kept reduced mod 2^w.
// Words of different widths never interact; mixing them is a usage error.
class Word {
public:
    static constexpr unsigned kMinWidth = 2;
    static constexpr unsigned kMaxWidth = 64;

    constexpr Word() = default;  // zero word of width 32

    Word(std::uint64_t value, unsigned width) : width_(width) {
        if (width < kMinWidth || width > kMaxWidth)
            throw std::invalid_argument("Word: width must be in [2,64], got " +
                                        std::to_string(width));
        value_ = value & mask_for(width);
    }

    constexpr std::uint64_t value() const { return value_; }
    constexpr unsigned width() const { return width_; }
    constexpr std::uint64_t mask() const { return mask_for(width_); }

    static constexpr std::uint64_t mask_for(unsigned width) {
        return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    }

    friend constexpr bool operator==(Word a, Word b) = default;

private:
    std::uint64_t value_ = 0;
    unsigned width_ = 32;
};

inline void require_same_width(Word a, Word b, const char* op) {
    if (a.width() != b.width())
        throw std::invalid_argument(std::string(op) + ": operand widths differ (" +
                                    std::to_string(a.width()) + " vs " +
                                    std::to_string(b.width()) + ")");
}

// p(x) = XOR of all bits of x.
inline Bit parity(Word x) {
    return static_cast<Bit>(std::popcount(x.value()) & 1u);
}

inline Word operator^(Word a, Word b) {
    require_same_width(a, b, "xor");
    return Word(a.value() ^ b.value(), a.width());
}

// Result of one traced modular addition. carry_vector holds the carry-in
// of every bit position of the ripple-carry sum (bit 0 is always 0); the
// carry out of the top bit is discarded.
struct AddResult {
    Word sum;
    Word carry_vector;
    Bit carry_parity;  // p(carry_vector); p(sum) = p(a) ^ p(b) ^ carry_parity
};

inline AddResult add_traced(Word a, Word b) {
    require_same_width(a, b, "add");
    const std::uint64_t m = a.mask();
    const std::uint64_t sum = (a.value() + b.value()) & m;
    // carry-in vector of the ripple addition: sum_i = a_i ^ b_i ^ c_i,
    // so c = a ^ b ^ sum (oracle-checked against the bit-level recurrence)
    const std::uint64_t cv = a.value() ^ b.value() ^ sum;
    return AddResult{Word(sum, a.width()), Word(cv, a.width()),
                     static_cast<Bit>(std::popcount(cv) & 1u)};
}

// Plain modular sum, no carry trace.
inline Word add(Word a, Word b) {
    require_same_width(a, b, "add");
    return Word((a.value() + b.value()) & a.mask(), a.width());
}

// Left rotation by r mod w. Preserves parity.
inline Word rotl(Word a, unsigned r) {
    const unsigned w = a.width();
    r %= w;
    if (r == 0) return a;
    return Word(((a.value() << r) | (a.value() >> (w - r))) & a.mask(), w);
}

// 0x-prefixed hex, zero-padded to ceil(w/4) digits.
std::string to_hex(Word x);

// Parses "0x"-prefixed (or bare) hex into a Word of the given width.
// Rejects values that do not fit in the width.
Word word_from_hex(std::string_view text, unsigned width);

}  // namespace parqr
