#include "parqr/chacha.hpp"

#include <stdexcept>

namespace parqr {

namespace {

constexpr std::uint32_t kConstants[4] = {0x61707865u, 0x3320646Eu, 0x79622D32u,
                                         0x6B206574u};

// quarterround target indices for one double-round: four columns, then
// four diagonals
constexpr unsigned kQrIndices[8][4] = {
    {0, 4, 8, 12}, {1, 5, 9, 13}, {2, 6, 10, 14}, {3, 7, 11, 15},
    {0, 5, 10, 15}, {1, 6, 11, 12}, {2, 7, 8, 13}, {3, 4, 9, 14},
};

std::uint32_t load_le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t max_counter(NonceLayout layout) {
    return layout == NonceLayout::ietf_96_32 ? 0xFFFFFFFFull : ~std::uint64_t{0};
}

void validate(const CipherParams& params, std::uint64_t counter) {
    if (params.rounds != 8 && params.rounds != 12 && params.rounds != 20)
        throw std::invalid_argument("rounds must be 8, 12 or 20");
    const std::size_t want = params.layout == NonceLayout::ietf_96_32 ? 12 : 8;
    if (params.nonce.size() != want)
        throw std::invalid_argument("nonce must be " + std::to_string(want) +
                                    " bytes for this layout");
    if (counter > max_counter(params.layout))
        throw std::overflow_error("counter exceeds the layout's counter field");
}

}  // namespace

const char* layout_name(NonceLayout l) {
    return l == NonceLayout::original_64_64 ? "orig" : "ietf";
}

StateMatrix init_state(const CipherParams& params, std::uint64_t counter) {
    validate(params, counter);
    StateMatrix m;
    for (int i = 0; i < 4; ++i) m.v[i] = Word(kConstants[i], 32);
    for (int i = 0; i < 8; ++i) m.v[4 + i] = Word(load_le32(params.key.data() + 4 * i), 32);
    if (params.layout == NonceLayout::original_64_64) {
        m.v[12] = Word(static_cast<std::uint32_t>(counter), 32);
        m.v[13] = Word(static_cast<std::uint32_t>(counter >> 32), 32);
        m.v[14] = Word(load_le32(params.nonce.data()), 32);
        m.v[15] = Word(load_le32(params.nonce.data() + 4), 32);
    } else {
        m.v[12] = Word(static_cast<std::uint32_t>(counter), 32);
        m.v[13] = Word(load_le32(params.nonce.data()), 32);
        m.v[14] = Word(load_le32(params.nonce.data() + 4), 32);
        m.v[15] = Word(load_le32(params.nonce.data() + 8), 32);
    }
    return m;
}

namespace {

Block serialize(const StateMatrix& v, const StateMatrix& m) {
    Block out{};
    for (int i = 0; i < 16; ++i) {
        const std::uint32_t word =
            static_cast<std::uint32_t>(add(v.v[i], m.v[i]).value());
        out[4 * i + 0] = static_cast<std::uint8_t>(word);
        out[4 * i + 1] = static_cast<std::uint8_t>(word >> 8);
        out[4 * i + 2] = static_cast<std::uint8_t>(word >> 16);
        out[4 * i + 3] = static_cast<std::uint8_t>(word >> 24);
    }
    return out;
}

}  // namespace

Block block(const CipherParams& params, std::uint64_t counter) {
    const StateMatrix m = init_state(params, counter);
    StateMatrix v = m;
    for (unsigned dr = 0; dr < params.rounds / 2; ++dr) {
        for (const auto& idx : kQrIndices) {
            const QrTrace t =
                quarterround(v.v[idx[0]], v.v[idx[1]], v.v[idx[2]], v.v[idx[3]]);
            v.v[idx[0]] = t.a_out;
            v.v[idx[1]] = t.b_out;
            v.v[idx[2]] = t.c_out;
            v.v[idx[3]] = t.d_out;
        }
    }
    return serialize(v, m);
}

std::vector<std::uint8_t> encrypt(const CipherParams& params, std::uint64_t counter_start,
                                  std::span<const std::uint8_t> message) {
    std::vector<std::uint8_t> out(message.size());
    if (message.empty()) return out;
    const std::uint64_t nblocks = (message.size() + 63) / 64;
    const std::uint64_t maxc = max_counter(params.layout);
    if (counter_start > maxc || nblocks - 1 > maxc - counter_start)
        throw std::overflow_error("message spans past the end of the counter space");
    for (std::size_t off = 0; off < message.size(); off += 64) {
        const Block ks = block(params, counter_start + off / 64);
        const std::size_t n = std::min<std::size_t>(64, message.size() - off);
        for (std::size_t i = 0; i < n; ++i) out[off + i] = message[off + i] ^ ks[i];
    }
    return out;
}

CheckedBlock block_checked(const CipherParams& params, std::uint64_t counter,
                           CedScheme scheme, std::span<const QrFault> faults) {
    const StateMatrix m = init_state(params, counter);
    const unsigned total_qrs = qr_count(params.rounds);
    for (const QrFault& f : faults)
        if (f.qr_index >= total_qrs)
            throw std::invalid_argument("qr_index " + std::to_string(f.qr_index) +
                                        " out of range (block has " +
                                        std::to_string(total_qrs) + " quarterrounds)");
    CheckedBlock result;
    result.verdicts.reserve(total_qrs);
    StateMatrix v = m;
    std::size_t qr_no = 0;
    for (unsigned dr = 0; dr < params.rounds / 2; ++dr) {
        for (const auto& idx : kQrIndices) {
            std::vector<FaultSpec> here;
            for (const QrFault& f : faults)
                if (f.qr_index == qr_no) here.push_back(f.fault);
            const Word a = v.v[idx[0]], b = v.v[idx[1]], c = v.v[idx[2]], d = v.v[idx[3]];
            // parities taken from the wires feeding this quarterround,
            // upstream of any injection point
            const InputParities ip = InputParities::from_words(a, b, c, d);
            const QrTrace t = quarterround(a, b, c, d, RotationSchedule::chacha(), here);
            result.verdicts.push_back(run_check(scheme, t, ip));
            v.v[idx[0]] = t.a_out;
            v.v[idx[1]] = t.b_out;
            v.v[idx[2]] = t.c_out;
            v.v[idx[3]] = t.d_out;
            ++qr_no;
        }
    }
    for (const CheckVerdict& verdict : result.verdicts)
        result.any_detected = result.any_detected || verdict.detected;
    result.bytes = serialize(v, m);
    return result;
}

}  // namespace parqr
