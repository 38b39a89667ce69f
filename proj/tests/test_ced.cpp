#include <doctest.h>

#include "oracles.hpp"
#include "parqr/ced.hpp"

using namespace parqr;

namespace {
QrTrace run4(unsigned packed, std::vector<FaultSpec> faults = {}) {
    return quarterround(Word(packed & 0xF, 4), Word((packed >> 4) & 0xF, 4),
                        Word((packed >> 8) & 0xF, 4), Word((packed >> 12) & 0xF, 4),
                        RotationSchedule::chacha(), faults);
}
}  // namespace

TEST_CASE("output-block parity prediction matches reality — exhaustive w=4") {
    for (unsigned packed = 0; packed < 0x10000; ++packed) {
        const QrTrace t = run4(packed);
        REQUIRE(predict_qr_parity(t) == qr_output_parity(t));
    }
}

TEST_CASE("output-block parity prediction matches reality — random w=32") {
    std::uint64_t rng = 202;
    for (int i = 0; i < 20000; ++i) {
        const QrTrace t = quarterround(
            Word(oracle::splitmix64(rng), 32), Word(oracle::splitmix64(rng), 32),
            Word(oracle::splitmix64(rng), 32), Word(oracle::splitmix64(rng), 32));
        REQUIRE(predict_qr_parity(t) == qr_output_parity(t));
    }
}

TEST_CASE("per-word closed-form predictions match reality — exhaustive w=4") {
    for (unsigned packed = 0; packed < 0x10000; ++packed) {
        const QrTrace t = run4(packed);
        const GroupParities g = predict_output_parities(t);
        REQUIRE(g.pa == parity(t.a_out));
        REQUIRE(g.pb == parity(t.b_out));
        REQUIRE(g.pc == parity(t.c_out));
        REQUIRE(g.pd == parity(t.d_out));
    }
}

TEST_CASE("per-word closed-form predictions match reality — random w=32 and w=64") {
    std::uint64_t rng = 203;
    for (int i = 0; i < 20000; ++i) {
        for (unsigned w : {32u, 64u}) {
            const QrTrace t = quarterround(
                Word(oracle::splitmix64(rng), w), Word(oracle::splitmix64(rng), w),
                Word(oracle::splitmix64(rng), w), Word(oracle::splitmix64(rng), w));
            const GroupParities g = predict_output_parities(t);
            REQUIRE(g.pa == parity(t.a_out));
            REQUIRE(g.pb == parity(t.b_out));
            REQUIRE(g.pc == parity(t.c_out));
            REQUIRE(g.pd == parity(t.d_out));
        }
    }
}

TEST_CASE("sequential prediction network equals the closed forms — all 256 cases") {
    for (unsigned bits = 0; bits < 256; ++bits) {
        const Bit pa = bits & 1, pb = (bits >> 1) & 1, pc = (bits >> 2) & 1,
                  pd = (bits >> 3) & 1;
        const Bit al = (bits >> 4) & 1, be = (bits >> 5) & 1, ga = (bits >> 6) & 1,
                  de = (bits >> 7) & 1;
        const GroupParities seq = gbpp(pa, pb, pc, pd, al, be, ga, de);
        const GroupParities closed = closed_form_parities(pa, pb, pc, pd, al, be, ga, de);
        REQUIRE(seq == closed);
        // folding the four per-word predictions gives the single-bit prediction
        const Bit folded = static_cast<Bit>(seq.pa ^ seq.pb ^ seq.pc ^ seq.pd);
        REQUIRE(folded == (pb ^ pc ^ be));
    }
}

TEST_CASE("input parities") {
    const QrTrace t = run4(0xABCD);
    const InputParities local = InputParities::from_trace(t);
    CHECK(local.source == InputParities::Source::computed_local);
    CHECK(local.pa == parity(t.a));
    CHECK(local.pb == parity(t.b));
    CHECK(local.pc == parity(t.c));
    CHECK(local.pd == parity(t.d));
    CHECK(local.p_block == (local.pa ^ local.pb ^ local.pc ^ local.pd));

    const InputParities sup = InputParities::from_words(Word(1, 4), Word(3, 4),
                                                        Word(7, 4), Word(0xF, 4));
    CHECK(sup.source == InputParities::Source::supplied_upstream);
    CHECK(sup.pa == 1);
    CHECK(sup.pb == 0);
    CHECK(sup.pc == 1);
    CHECK(sup.pd == 0);
    CHECK(sup.p_block == 0);
}

TEST_CASE("no false positives on fault-free traces — exhaustive w=4") {
    for (unsigned packed = 0; packed < 0x10000; ++packed) {
        const QrTrace t = run4(packed);
        const InputParities ip = InputParities::from_trace(t);
        REQUIRE(!check_classic(t, ip).detected);
        REQUIRE(!check_gbpp(t, ip).detected);
    }
}

TEST_CASE("no false positives on fault-free traces — random w=32") {
    std::uint64_t rng = 204;
    for (int i = 0; i < 20000; ++i) {
        const QrTrace t = quarterround(
            Word(oracle::splitmix64(rng), 32), Word(oracle::splitmix64(rng), 32),
            Word(oracle::splitmix64(rng), 32), Word(oracle::splitmix64(rng), 32));
        const InputParities ip = InputParities::from_trace(t);
        REQUIRE(!check_classic(t, ip).detected);
        REQUIRE(!check_gbpp(t, ip).detected);
    }
}

TEST_CASE("classic detects odd input-block errors when p_block is supplied upstream") {
    std::uint64_t rng = 205;
    for (int i = 0; i < 2000; ++i) {
        const Word a(oracle::splitmix64(rng), 32), b(oracle::splitmix64(rng), 32);
        const Word c(oracle::splitmix64(rng), 32), d(oracle::splitmix64(rng), 32);
        const InputParities honest = InputParities::from_words(a, b, c, d);
        // odd-weight 128-bit mask
        std::uint64_t ea = oracle::splitmix64(rng) & 0xFFFFFFFF;
        std::uint64_t eb = oracle::splitmix64(rng) & 0xFFFFFFFF;
        std::uint64_t ec = oracle::splitmix64(rng) & 0xFFFFFFFF;
        std::uint64_t ed = oracle::splitmix64(rng) & 0xFFFFFFFF;
        if ((oracle::parity_loop(ea) ^ oracle::parity_loop(eb) ^ oracle::parity_loop(ec) ^
             oracle::parity_loop(ed)) == 0)
            ea ^= 1;
        const std::vector<FaultSpec> f = {FaultSpec::block(ea, eb, ec, ed)};
        const QrTrace t = quarterround(a, b, c, d, RotationSchedule::chacha(), f);
        CHECK(check_classic(t, honest).detected);
    }
}

TEST_CASE("classic is blind to output-wire errors on a_out") {
    std::uint64_t rng = 206;
    for (int i = 0; i < 2000; ++i) {
        const Word a(oracle::splitmix64(rng), 32), b(oracle::splitmix64(rng), 32);
        const Word c(oracle::splitmix64(rng), 32), d(oracle::splitmix64(rng), 32);
        const InputParities honest = InputParities::from_words(a, b, c, d);
        std::uint64_t e = oracle::splitmix64(rng) & 0xFFFFFFFF;
        if (oracle::parity_loop(e) == 0) e ^= 1;
        const std::vector<FaultSpec> f = {FaultSpec::word(SignalId::A_OUT, e)};
        const QrTrace t = quarterround(a, b, c, d, RotationSchedule::chacha(), f);
        CHECK(!check_classic(t, honest).detected);
        // while the group-based checker sees it
        CHECK(check_gbpp(t, honest).detected);
    }
}

TEST_CASE("group-based checker catches odd errors on a0, with comparator d firing") {
    std::uint64_t rng = 207;
    for (int i = 0; i < 2000; ++i) {
        const Word a(oracle::splitmix64(rng), 32), b(oracle::splitmix64(rng), 32);
        const Word c(oracle::splitmix64(rng), 32), d(oracle::splitmix64(rng), 32);
        const InputParities honest = InputParities::from_words(a, b, c, d);
        std::uint64_t e = oracle::splitmix64(rng) & 0xFFFFFFFF;
        if (oracle::parity_loop(e) == 0) e ^= 1;
        const std::vector<FaultSpec> f = {FaultSpec::word(SignalId::A0, e)};
        const QrTrace t = quarterround(a, b, c, d, RotationSchedule::chacha(), f);
        const CheckVerdict v = check_gbpp(t, honest);
        CHECK(v.detected);
        CHECK((v.fired & kCmpD) != 0);
        // classic misses the same fault
        CHECK(!check_classic(t, honest).detected);
    }
}

TEST_CASE("tap flips: gbpp sees all four, classic sees only its own tap") {
    std::uint64_t rng = 208;
    for (int i = 0; i < 500; ++i) {
        const Word a(oracle::splitmix64(rng), 32), b(oracle::splitmix64(rng), 32);
        const Word c(oracle::splitmix64(rng), 32), d(oracle::splitmix64(rng), 32);
        const InputParities honest = InputParities::from_words(a, b, c, d);
        for (auto sig : {SignalId::ALPHA, SignalId::BETA, SignalId::GAMMA, SignalId::DELTA}) {
            const std::vector<FaultSpec> f = {FaultSpec::tap(sig, 1)};
            const QrTrace t = quarterround(a, b, c, d, RotationSchedule::chacha(), f);
            CHECK(check_gbpp(t, honest).detected);
            CHECK(check_classic(t, honest).detected == (sig == SignalId::BETA));
        }
    }
}

TEST_CASE("verdict bookkeeping") {
    const QrTrace t = run4(0x1234);
    const InputParities ip = InputParities::from_trace(t);
    const CheckVerdict vc = check_classic(t, ip);
    CHECK(vc.scheme == CedScheme::classic);
    CHECK(vc.fired == 0);
    CHECK(vc.predicted == vc.observed);
    const CheckVerdict vg = check_gbpp(t, ip);
    CHECK(vg.scheme == CedScheme::gbpp);
    CHECK(vg.fired == 0);
    CHECK((vg.fired & ~(kCmpA | kCmpB | kCmpC | kCmpD)) == 0);
    CHECK(std::string(scheme_name(CedScheme::classic)) == "classic");
    CHECK(std::string(scheme_name(CedScheme::gbpp)) == "gbpp");
}

TEST_CASE("raw fast-path checkers agree with the public ones") {
    std::uint64_t rng = 209;
    for (int i = 0; i < 3000; ++i) {
        const unsigned w = (i % 2) ? 32u : 4u;
        const std::uint64_t m = Word::mask_for(w);
        const std::uint64_t a = oracle::splitmix64(rng) & m, b = oracle::splitmix64(rng) & m;
        const std::uint64_t c = oracle::splitmix64(rng) & m, d = oracle::splitmix64(rng) & m;
        // random single fault on a random signal
        const auto sig = static_cast<SignalId>(oracle::splitmix64(rng) % kSignalCount);
        FaultSpec f;
        f.signal = sig;
        if (is_tap(sig)) {
            f.lanes[0] = 1;
        } else if (is_input_block(sig)) {
            for (auto& lane : f.lanes) lane = oracle::splitmix64(rng) & m;
        } else {
            f.lanes[0] = oracle::splitmix64(rng) & m;
        }
        const std::vector<FaultSpec> faults = {f};
        const Word wa(a, w), wb(b, w), wc(c, w), wd(d, w);
        const InputParities honest = InputParities::from_words(wa, wb, wc, wd);
        const QrTrace t = quarterround(wa, wb, wc, wd, RotationSchedule::chacha(), faults);

        std::uint64_t mk[kWireCount] = {};
        if (is_input_block(sig)) {
            for (unsigned k = 0; k < 4; ++k) mk[k] = f.lanes[k];
        } else {
            mk[static_cast<unsigned>(sig)] = f.lanes[0];
        }
        const unsigned rot[4] = {16 % w, 12 % w, 8 % w, 7 % w};
        const detail::RawTrace r = detail::qr_kernel(a, b, c, d, w, m, rot, mk);

        CHECK(detail::raw_classic_detects(r, honest.p_block) ==
              check_classic(t, honest).detected);
        CHECK(detail::raw_gbpp_detects(r, honest.pa, honest.pb, honest.pc, honest.pd) ==
              check_gbpp(t, honest).detected);
    }
}
