#include "parqr/ced.hpp"

namespace parqr {

const char* scheme_name(CedScheme s) {
    return s == CedScheme::classic ? "classic" : "gbpp";
}

Bit predict_qr_parity(const QrTrace& t) {
    return static_cast<Bit>(parity(t.b) ^ parity(t.c) ^ t.beta);
}

GroupParities predict_output_parities(const QrTrace& t) {
    return closed_form_parities(parity(t.a), parity(t.b), parity(t.c), parity(t.d),
                              t.alpha, t.beta, t.gamma, t.delta);
}

CheckVerdict check_classic(const QrTrace& t, const InputParities& ip) {
    CheckVerdict v;
    v.scheme = CedScheme::classic;
    const Bit predicted =
        static_cast<Bit>(ip.p_block ^ parity(t.a) ^ parity(t.d) ^ t.beta);
    const Bit observed = qr_output_parity(t);
    v.predicted = predicted;
    v.observed = observed;
    v.fired = (predicted != observed) ? kCmpSingle : 0;
    v.detected = v.fired != 0;
    return v;
}

CheckVerdict check_gbpp(const QrTrace& t, const InputParities& ip) {
    CheckVerdict v;
    v.scheme = CedScheme::gbpp;
    const GroupParities g =
        gbpp(ip.pa, ip.pb, ip.pc, ip.pd, t.alpha, t.beta, t.gamma, t.delta);
    const Bit oa = parity(t.a_out), ob = parity(t.b_out);
    const Bit oc = parity(t.c_out), od = parity(t.d_out);
    v.predicted = static_cast<std::uint8_t>(g.pa | (g.pb << 1) | (g.pc << 2) | (g.pd << 3));
    v.observed = static_cast<std::uint8_t>(oa | (ob << 1) | (oc << 2) | (od << 3));
    v.fired = v.predicted ^ v.observed;
    v.detected = v.fired != 0;
    return v;
}

CheckVerdict run_check(CedScheme scheme, const QrTrace& t, const InputParities& ip) {
    return scheme == CedScheme::classic ? check_classic(t, ip) : check_gbpp(t, ip);
}

}  // namespace parqr
