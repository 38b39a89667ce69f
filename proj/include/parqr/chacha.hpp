// The full block cipher core: 4x4 state of 32-bit words, alternating
// column/diagonal quarterround rounds, feed-forward, little-endian
// serialization, XOR encryption. A checked variant runs one parity checker
// per quarterround invocation.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "parqr/ced.hpp"
#include "parqr/quarterround.hpp"
#include "parqr/word.hpp"

namespace parqr {

enum class NonceLayout {
    original_64_64,  // 64-bit counter in words 12-13, 64-bit nonce in 14-15
    ietf_96_32,      // 32-bit counter in word 12, 96-bit nonce in 13-15
};

const char* layout_name(NonceLayout l);

struct CipherParams {
    unsigned rounds = 20;  // 8, 12 or 20
    std::array<std::uint8_t, 32> key{};
    NonceLayout layout = NonceLayout::ietf_96_32;
    std::vector<std::uint8_t> nonce;  // 8 bytes (original) or 12 bytes (ietf)
};

struct StateMatrix {
    std::array<Word, 16> v;  // row-major; all words are 32-bit
    StateMatrix() { v.fill(Word(0, 32)); }
};

using Block = std::array<std::uint8_t, 64>;

// Number of quarterround invocations in one block: 8 per double-round.
constexpr unsigned qr_count(unsigned rounds) { return 4 * rounds; }
// (rounds/2 double-rounds x 8 QRs = 4*rounds)

// Validates params and loads constants, key, counter and nonce.
StateMatrix init_state(const CipherParams& params, std::uint64_t counter);

// One 64-byte keystream block.
Block block(const CipherParams& params, std::uint64_t counter);

// XOR encryption/decryption; the counter advances per 64-byte block and
// overflow of the layout's counter field raises std::overflow_error.
std::vector<std::uint8_t> encrypt(const CipherParams& params, std::uint64_t counter_start,
                                  std::span<const std::uint8_t> message);

// A fault to inject into one specific quarterround invocation of a checked
// block run. qr_index counts invocations in execution order from 0.
struct QrFault {
    std::size_t qr_index = 0;
    FaultSpec fault;
};

struct CheckedBlock {
    Block bytes;                        // keystream (reflects any injected faults)
    std::vector<CheckVerdict> verdicts; // one per quarterround, execution order
    bool any_detected = false;
};

// Runs the block with a checker observing every quarterround. Input
// parities for each check are computed from the state words feeding that
// quarterround, before any injected fault. With no faults the result
// equals block() and every verdict is clean.
CheckedBlock block_checked(const CipherParams& params, std::uint64_t counter,
                           CedScheme scheme, std::span<const QrFault> faults = {});

}  // namespace parqr
