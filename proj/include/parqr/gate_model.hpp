// Structural gate-count accounting for the two checker circuits. Counts
// only the detection overhead: parity trees, prediction network,
// comparators. The datapath's own adders are not counted, and the
// carry-parity taps are taken from the adders for free. Parity trees over
// n bits cost n-1 two-input XORs; a 4-input OR counts as one gate.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parqr/ced.hpp"

namespace parqr {

struct GateItem {
    std::string label;
    unsigned xor2 = 0;
    unsigned or4 = 0;
    unsigned gates() const { return xor2 + or4; }
};

struct GateTally {
    CedScheme scheme = CedScheme::classic;
    unsigned width = 32;
    std::vector<GateItem> breakdown;
    unsigned xor2() const {
        unsigned n = 0;
        for (const auto& i : breakdown) n += i.xor2;
        return n;
    }
    unsigned or4() const {
        unsigned n = 0;
        for (const auto& i : breakdown) n += i.or4;
        return n;
    }
    unsigned total() const { return xor2() + or4(); }
};

// Single-comparator scheme: parity trees for b and c plus two XORs folding
// in the beta tap, one parity tree over the concatenated 4w-bit output,
// one comparator. Total 6w.
GateTally count_classic(unsigned width);

// Group-based scheme: parity trees for all four inputs and all four
// outputs, twelve XORs for the eight-step prediction network, four
// comparators, one 4-input OR merging the alarms. Total 8w + 9.
GateTally count_gbpp(unsigned width);

GateTally gate_tally(CedScheme scheme, unsigned width);

}  // namespace parqr
