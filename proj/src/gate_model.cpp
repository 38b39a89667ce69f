#include "parqr/gate_model.hpp"

#include <stdexcept>

namespace parqr {

namespace {
void require_width(unsigned width) {
    if (width < 2 || width > 64)
        throw std::invalid_argument("gate tally: width must be in [2,64]");
}
}  // namespace

GateTally count_classic(unsigned width) {
    require_width(width);
    GateTally t;
    t.scheme = CedScheme::classic;
    t.width = width;
    // p(b) and p(c) trees plus two XORs folding beta into the prediction
    t.breakdown.push_back({"input_parity", 2 * (width - 1) + 2, 0});
    // one tree over the 4w-bit output block
    t.breakdown.push_back({"output_parity", 4 * width - 1, 0});
    t.breakdown.push_back({"compare", 1, 0});
    return t;
}

GateTally count_gbpp(unsigned width) {
    require_width(width);
    GateTally t;
    t.scheme = CedScheme::gbpp;
    t.width = width;
    // four input parity trees
    t.breakdown.push_back({"input_parity", 4 * (width - 1), 0});
    // four output parity trees
    t.breakdown.push_back({"output_parity", 4 * (width - 1), 0});
    // eight update steps: four with a tap (2 XORs each), four without (1 each)
    t.breakdown.push_back({"prediction_update", 12, 0});
    t.breakdown.push_back({"compare", 4, 0});
    t.breakdown.push_back({"alarm_merge", 0, 1});
    return t;
}

GateTally gate_tally(CedScheme scheme, unsigned width) {
    return scheme == CedScheme::classic ? count_classic(width) : count_gbpp(width);
}

}  // namespace parqr
