#include "parqr/quarterround.hpp"

namespace parqr {

namespace {
constexpr const char* kSignalNames[kSignalCount] = {
    "a",     "b",    "c",     "d",     "a0",    "b0",    "b1",
    "b2",    "c0",   "d0",    "d1",    "d2",    "alpha", "beta",
    "gamma", "delta", "a_out", "b_out", "c_out", "d_out", "input_block",
};
}  // namespace

const char* signal_name(SignalId s) {
    return kSignalNames[static_cast<unsigned>(s)];
}

std::optional<SignalId> parse_signal(std::string_view name) {
    for (unsigned i = 0; i < kSignalCount; ++i)
        if (name == kSignalNames[i]) return static_cast<SignalId>(i);
    return std::nullopt;
}

FaultSpec FaultSpec::block_packed(std::uint64_t lo, std::uint64_t hi, unsigned width) {
    if (width < Word::kMinWidth || width > Word::kMaxWidth)
        throw std::invalid_argument("block_packed: bad width");
    const std::uint64_t m = Word::mask_for(width);
    auto slice = [&](unsigned word_idx) -> std::uint64_t {
        const unsigned start = word_idx * width;  // bit offset within 128
        std::uint64_t v;
        if (start >= 64) {
            v = hi >> (start - 64);
        } else {
            v = lo >> start;
            if (start + width > 64 && start != 0) v |= hi << (64 - start);
        }
        return v & m;
    };
    return block(slice(0), slice(1), slice(2), slice(3));
}

Word QrTrace::wire(SignalId s) const {
    switch (s) {
        case SignalId::A: return a;
        case SignalId::B: return b;
        case SignalId::C: return c;
        case SignalId::D: return d;
        case SignalId::A0: return a0;
        case SignalId::B0: return b0;
        case SignalId::B1: return b1;
        case SignalId::B2: return b2;
        case SignalId::C0: return c0;
        case SignalId::D0: return d0;
        case SignalId::D1: return d1;
        case SignalId::D2: return d2;
        case SignalId::A_OUT: return a_out;
        case SignalId::B_OUT: return b_out;
        case SignalId::C_OUT: return c_out;
        case SignalId::D_OUT: return d_out;
        default:
            throw std::invalid_argument("QrTrace::wire: not a word signal");
    }
}

Bit QrTrace::tap(SignalId s) const {
    switch (s) {
        case SignalId::ALPHA: return alpha;
        case SignalId::BETA: return beta;
        case SignalId::GAMMA: return gamma;
        case SignalId::DELTA: return delta;
        default:
            throw std::invalid_argument("QrTrace::tap: not a tap signal");
    }
}

QrTrace quarterround(Word a, Word b, Word c, Word d, RotationSchedule schedule,
                     std::span<const FaultSpec> faults) {
    require_same_width(a, b, "quarterround");
    require_same_width(a, c, "quarterround");
    require_same_width(a, d, "quarterround");
    const unsigned w = a.width();
    const std::uint64_t m = a.mask();

    std::uint64_t mk[kWireCount] = {};
    bool seen[kSignalCount] = {};
    for (const FaultSpec& f : faults) {
        const unsigned idx = static_cast<unsigned>(f.signal);
        if (idx >= kSignalCount)
            throw std::invalid_argument("quarterround: bad fault signal");
        if (seen[idx])
            throw std::invalid_argument(std::string("quarterround: duplicate fault on ") +
                                        signal_name(f.signal));
        seen[idx] = true;
        if (is_input_block(f.signal)) {
            for (unsigned i = 0; i < 4; ++i) {
                if (f.lanes[i] & ~m)
                    throw std::invalid_argument("quarterround: input block mask exceeds width");
                mk[i] ^= f.lanes[i];
            }
        } else if (is_tap(f.signal)) {
            if (f.lanes[0] > 1)
                throw std::invalid_argument("quarterround: tap masks are single bits");
            mk[idx] ^= f.lanes[0];
        } else {
            if (f.lanes[0] & ~m)
                throw std::invalid_argument(std::string("quarterround: mask on ") +
                                            signal_name(f.signal) + " exceeds width");
            mk[idx] ^= f.lanes[0];
        }
    }

    unsigned rot[4];
    for (int i = 0; i < 4; ++i) rot[i] = schedule.r[i] % w;

    const detail::RawTrace r =
        detail::qr_kernel(a.value(), b.value(), c.value(), d.value(), w, m, rot, mk);

    QrTrace t;
    t.a = Word(r.a, w); t.b = Word(r.b, w); t.c = Word(r.c, w); t.d = Word(r.d, w);
    t.a0 = Word(r.a0, w); t.b0 = Word(r.b0, w); t.b1 = Word(r.b1, w); t.b2 = Word(r.b2, w);
    t.c0 = Word(r.c0, w); t.d0 = Word(r.d0, w); t.d1 = Word(r.d1, w); t.d2 = Word(r.d2, w);
    t.alpha = r.alpha; t.beta = r.beta; t.gamma = r.gamma; t.delta = r.delta;
    t.a_out = Word(r.a_out, w); t.b_out = Word(r.b_out, w);
    t.c_out = Word(r.c_out, w); t.d_out = Word(r.d_out, w);
    t.rotation_schedule = schedule.r;
    return t;
}

Bit qr_output_parity(const QrTrace& t) {
    // parity of a concatenation = XOR of the word parities
    return parity(t.a_out ^ t.b_out ^ t.c_out ^ t.d_out);
}

}  // namespace parqr
