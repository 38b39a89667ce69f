// Command-line front end. Subcommands: encrypt, qr-trace, verify-identities,
// campaign, gates. stdout carries data only; stderr carries diagnostics and
// check verdicts. Exit codes: 0 success, 1 verification or coverage
// expectation failure, 2 usage error or infeasible request.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parqr/ced.hpp"
#include "parqr/chacha.hpp"
#include "parqr/fault.hpp"
#include "parqr/gate_model.hpp"
#include "parqr/identities.hpp"
#include "parqr/quarterround.hpp"
#include "parqr/word.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace parqr;

unsigned hex_nibble(char ch, const char* what) {
    if (ch >= '0' && ch <= '9') return static_cast<unsigned>(ch - '0');
    if (ch >= 'a' && ch <= 'f') return static_cast<unsigned>(ch - 'a') + 10;
    if (ch >= 'A' && ch <= 'F') return static_cast<unsigned>(ch - 'A') + 10;
    throw std::invalid_argument(std::string(what) + ": invalid hex digit '" +
                                std::string(1, ch) + "'");
}

std::string_view strip_0x(std::string_view s) {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    return s;
}

std::vector<std::uint8_t> parse_hex_bytes(std::string_view text, const char* what,
                                          std::size_t expect_bytes) {
    const std::string_view s = strip_0x(text);
    if (s.empty() || s.size() % 2 != 0)
        throw std::invalid_argument(std::string(what) +
                                    ": need a non-empty, even number of hex digits");
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(hex_nibble(s[2 * i], what) << 4 |
                                           hex_nibble(s[2 * i + 1], what));
    if (expect_bytes != 0 && out.size() != expect_bytes)
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(expect_bytes) + " bytes, got " +
                                    std::to_string(out.size()));
    return out;
}

std::uint64_t parse_hex_u64(std::string_view text, const char* what) {
    const std::string_view s = strip_0x(text);
    if (s.empty() || s.size() > 16)
        throw std::invalid_argument(std::string(what) + ": expected 1-16 hex digits");
    std::uint64_t v = 0;
    for (char ch : s) v = v << 4 | hex_nibble(ch, what);
    return v;
}

// Up to 256 bits of hex as four little-endian 64-bit limbs.
std::array<std::uint64_t, 4> parse_hex_limbs(std::string_view text, const char* what) {
    const std::string_view s = strip_0x(text);
    if (s.empty() || s.size() > 64)
        throw std::invalid_argument(std::string(what) + ": expected 1-64 hex digits");
    std::array<std::uint64_t, 4> limbs{};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::uint64_t nib = hex_nibble(s[s.size() - 1 - i], what);
        limbs[i / 16] |= nib << ((i % 16) * 4);
    }
    return limbs;
}

std::uint64_t extract_bits(const std::array<std::uint64_t, 4>& limbs, unsigned offset,
                           unsigned width) {
    const unsigned limb = offset / 64, shift = offset % 64;
    std::uint64_t v = limbs[limb] >> shift;
    if (shift != 0 && limb + 1 < 4) v |= limbs[limb + 1] << (64 - shift);
    return v & Word::mask_for(width);
}

// SIGNAL:MASKHEX. Word wires take a w-bit mask, taps take 0 or 1, and
// input_block takes one packed 4w-bit mask (bits [0,w) land on a).
FaultSpec parse_fault_arg(const std::string& text, unsigned width) {
    const auto pos = text.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("--fault expects SIGNAL:MASKHEX, got '" + text + "'");
    const std::string name = text.substr(0, pos);
    const std::string mask = text.substr(pos + 1);
    const auto sid = parse_signal(name);
    if (!sid) throw std::invalid_argument("unknown signal '" + name + "'");
    if (is_tap(*sid)) {
        const std::uint64_t v = parse_hex_u64(mask, "tap mask");
        if (v > 1)
            throw std::invalid_argument("tap masks are single bits, got '" + mask + "'");
        return FaultSpec::tap(*sid, static_cast<Bit>(v));
    }
    if (is_input_block(*sid)) {
        const auto limbs = parse_hex_limbs(mask, "input_block mask");
        for (unsigned bit = 4 * width; bit < 256; ++bit)
            if ((limbs[bit / 64] >> (bit % 64)) & 1)
                throw std::invalid_argument("input_block mask exceeds " +
                                            std::to_string(4 * width) + " bits");
        return FaultSpec::block(
            extract_bits(limbs, 0, width), extract_bits(limbs, width, width),
            extract_bits(limbs, 2 * width, width), extract_bits(limbs, 3 * width, width));
    }
    return FaultSpec::word(*sid, word_from_hex(mask, width).value());
}

CedScheme parse_scheme(const std::string& s) {
    if (s == "classic") return CedScheme::classic;
    if (s == "gbpp") return CedScheme::gbpp;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected classic|gbpp)");
}

std::vector<std::uint8_t> read_input(const std::string& path) {
    if (path.empty() || path == "-")
        return {std::istreambuf_iterator<char>(std::cin),
                std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, std::span<const std::uint8_t> data) {
    if (path.empty() || path == "-") {
        std::cout.write(reinterpret_cast<const char*>(data.data()),
                        static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- encrypt

struct EncryptOpts {
    unsigned rounds = 20;
    std::string key, nonce, layout = "ietf", check, in_path, out_path;
    std::uint64_t counter = 0;
};

int cmd_encrypt(const EncryptOpts& o) {
    CipherParams p;
    p.rounds = o.rounds;
    p.layout = o.layout == "orig" ? NonceLayout::original_64_64 : NonceLayout::ietf_96_32;
    const auto key = parse_hex_bytes(o.key, "--key", 32);
    std::copy(key.begin(), key.end(), p.key.begin());
    p.nonce = parse_hex_bytes(o.nonce, "--nonce", 0);

    const auto message = read_input(o.in_path);
    if (o.check.empty()) {
        write_output(o.out_path, encrypt(p, o.counter, message));
        return 0;
    }

    // checked path: run every block under the chosen checker and emit one
    // verdict line per block on stderr
    const CedScheme scheme = parse_scheme(o.check);
    const std::uint64_t max_counter =
        p.layout == NonceLayout::ietf_96_32 ? 0xFFFFFFFFull : ~std::uint64_t{0};
    const std::uint64_t nblocks = (message.size() + 63) / 64;
    if (o.counter > max_counter ||
        (nblocks != 0 && nblocks - 1 > max_counter - o.counter))
        throw std::overflow_error("encrypt: counter space exhausted for this layout");

    std::vector<std::uint8_t> out(message.size());
    for (std::uint64_t i = 0; i < nblocks; ++i) {
        const CheckedBlock cb = block_checked(p, o.counter + i, scheme);
        json fired = json::array();
        for (std::size_t q = 0; q < cb.verdicts.size(); ++q)
            if (cb.verdicts[q].detected)
                fired.push_back(json{{"qr", q},
                                     {"comparators", cb.verdicts[q].fired}});
        const json line{{"counter", o.counter + i},
                        {"scheme", scheme_name(scheme)},
                        {"qr_checks", cb.verdicts.size()},
                        {"alarms", fired.size()},
                        {"fired", fired}};
        std::cerr << line.dump() << "\n";
        const std::size_t off = static_cast<std::size_t>(i) * 64;
        const std::size_t n = std::min<std::size_t>(64, message.size() - off);
        for (std::size_t k = 0; k < n; ++k) out[off + k] = message[off + k] ^ cb.bytes[k];
    }
    write_output(o.out_path, out);
    return 0;
}

// --------------------------------------------------------------- qr-trace

struct QrTraceOpts {
    unsigned width = 32;
    std::string a, b, c, d, schedule;
    std::vector<std::string> faults;
};

int cmd_qr_trace(const QrTraceOpts& o) {
    const Word a = word_from_hex(o.a, o.width);
    const Word b = word_from_hex(o.b, o.width);
    const Word c = word_from_hex(o.c, o.width);
    const Word d = word_from_hex(o.d, o.width);

    RotationSchedule sched;
    if (!o.schedule.empty()) {
        std::array<unsigned, 4> r{};
        std::size_t idx = 0, start = 0;
        while (idx < 4) {
            const auto comma = o.schedule.find(',', start);
            const std::string part = o.schedule.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            try {
                r[idx] = static_cast<unsigned>(std::stoul(part));
            } catch (const std::exception&) {
                throw std::invalid_argument("--schedule expects R1,R2,R3,R4");
            }
            ++idx;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (idx != 4)
            throw std::invalid_argument("--schedule expects exactly four rotations");
        sched.r = r;
    }

    std::vector<FaultSpec> faults;
    for (const auto& f : o.faults) faults.push_back(parse_fault_arg(f, o.width));

    const QrTrace t = quarterround(a, b, c, d, sched, faults);
    // honest parities of the supplied (pre-injection) inputs
    const InputParities ip = InputParities::from_words(a, b, c, d);
    const CheckVerdict vc = check_classic(t, ip);
    const CheckVerdict vg = check_gbpp(t, ip);

    json faults_j = json::array();
    for (const auto& f : faults) {
        json lanes = json::array();
        for (std::uint64_t lane : f.lanes) lanes.push_back(to_hex(Word(lane, o.width)));
        faults_j.push_back(json{{"signal", signal_name(f.signal)}, {"lanes", lanes}});
    }

    const auto verdict_json = [](const CheckVerdict& v) {
        return json{{"scheme", scheme_name(v.scheme)},
                    {"detected", v.detected},
                    {"fired", v.fired},
                    {"predicted", v.predicted},
                    {"observed", v.observed}};
    };

    const json doc{
        {"width", o.width},
        {"rotation_schedule", json::array({t.rotation_schedule[0], t.rotation_schedule[1],
                                           t.rotation_schedule[2], t.rotation_schedule[3]})},
        {"faults", faults_j},
        {"trace",
         {{"a", to_hex(t.a)},
          {"b", to_hex(t.b)},
          {"c", to_hex(t.c)},
          {"d", to_hex(t.d)},
          {"a0", to_hex(t.a0)},
          {"d0", to_hex(t.d0)},
          {"d1", to_hex(t.d1)},
          {"c0", to_hex(t.c0)},
          {"b0", to_hex(t.b0)},
          {"b1", to_hex(t.b1)},
          {"d2", to_hex(t.d2)},
          {"b2", to_hex(t.b2)},
          {"alpha", t.alpha},
          {"beta", t.beta},
          {"gamma", t.gamma},
          {"delta", t.delta},
          {"a_out", to_hex(t.a_out)},
          {"b_out", to_hex(t.b_out)},
          {"c_out", to_hex(t.c_out)},
          {"d_out", to_hex(t.d_out)}}},
        {"output_parity", qr_output_parity(t)},
        {"input_parities",
         {{"pa", ip.pa},
          {"pb", ip.pb},
          {"pc", ip.pc},
          {"pd", ip.pd},
          {"p_block", ip.p_block}}},
        {"checks", {{"classic", verdict_json(vc)}, {"gbpp", verdict_json(vg)}}}};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------- verify-identities

struct VerifyOpts {
    unsigned width = 4;
    std::string mode = "exhaustive", suite;
    std::uint64_t samples = 1000000, seed = 0;
};

int cmd_verify(const VerifyOpts& o) {
    IdentityRunConfig cfg;
    cfg.width = o.width;
    cfg.exhaustive = o.mode == "exhaustive";
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    if (!o.suite.empty()) cfg.only_suite = o.suite;

    const auto results = run_identity_suites(cfg);
    std::uint64_t total = 0;
    json suites = json::array();
    for (const auto& r : results) {
        total += r.violations;
        suites.push_back(json{{"suite", r.suite},
                              {"mode", r.mode},
                              {"evaluations", r.evaluations},
                              {"violations", r.violations}});
    }
    const json doc{{"width", o.width},    {"mode", o.mode},
                   {"samples", o.samples}, {"seed", o.seed},
                   {"suites", suites},     {"total_violations", total},
                   {"pass", total == 0}};
    std::cout << doc.dump(2) << "\n";
    return total == 0 ? 0 : 1;
}

// --------------------------------------------------------------- campaign

struct CampaignOpts {
    unsigned width = 4;
    std::string scheme, signals = "all", errors = "odd-exhaustive";
    std::uint64_t samples = 0, seed = 0;
    std::string out = "-", csv;
    bool expect = false;
    unsigned jobs = 1;
};

int cmd_campaign(const CampaignOpts& o) {
    CampaignConfig cfg;
    cfg.width = o.width;
    cfg.scheme = parse_scheme(o.scheme);
    const auto policy = parse_error_policy(o.errors);
    if (!policy)
        throw std::invalid_argument("unknown error policy '" + o.errors + "'");
    cfg.errors = *policy;
    cfg.inputs = cfg.errors == ErrorPolicy::odd_exhaustive ? InputPolicy::exhaustive
                                                           : InputPolicy::random;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    if (o.expect && cfg.errors == ErrorPolicy::even_random)
        throw std::invalid_argument(
            "--expect-paper grades odd-error coverage and does not apply to "
            "even-random campaigns");

    if (o.signals == "all") {
        cfg.signals = campaign_signals(cfg.errors);
    } else {
        std::size_t start = 0;
        while (start <= o.signals.size()) {
            const auto comma = o.signals.find(',', start);
            const std::string name = o.signals.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            const auto sid = parse_signal(name);
            if (!sid) throw std::invalid_argument("unknown signal '" + name + "'");
            cfg.signals.push_back(*sid);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    const CoverageReport report = run_campaign(cfg);
    std::optional<Classification> cls;
    if (o.expect) cls = classify_report(report);

    write_text(o.out, report_to_json(report, cls ? &*cls : nullptr));
    if (!o.csv.empty()) write_text(o.csv, report_to_csv(report));

    if (cls && !cls->pass) {
        for (const auto& f : cls->failures) std::cerr << "coverage expectation violated: " << f << "\n";
        return 1;
    }
    return 0;
}

// ------------------------------------------------------------------ gates

struct GatesOpts {
    unsigned width = 32;
    std::string scheme;
    bool json_out = false;
};

int cmd_gates(const GatesOpts& o) {
    const GateTally t = gate_tally(parse_scheme(o.scheme), o.width);
    if (o.json_out) {
        json items = json::array();
        for (const auto& i : t.breakdown)
            items.push_back(json{{"label", i.label}, {"xor2", i.xor2}, {"or4", i.or4}});
        const json doc{{"scheme", scheme_name(t.scheme)}, {"width", t.width},
                       {"breakdown", items},              {"xor2", t.xor2()},
                       {"or4", t.or4()},                  {"total", t.total()}};
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    std::cout << scheme_name(t.scheme) << " w=" << t.width << ": " << t.total()
              << " gates (xor2 " << t.xor2() << ", or4 " << t.or4() << ")\n";
    for (const auto& i : t.breakdown) {
        std::cout << "  " << i.label << ":";
        if (i.xor2 != 0) std::cout << " xor2 " << i.xor2;
        if (i.or4 != 0) std::cout << " or4 " << i.or4;
        if (i.xor2 == 0 && i.or4 == 0) std::cout << " 0";
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "width-parametric quarterround and block cipher core with parity-based "
        "concurrent error detection, fault-injection campaigns, identity "
        "verification, and gate-count accounting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "parqr 0.1.0");

    EncryptOpts eo;
    CLI::App* enc = app.add_subcommand("encrypt", "XOR-encrypt data with the keystream");
    enc->add_option("--rounds", eo.rounds, "round count")
        ->check(CLI::IsMember({8, 12, 20}))
        ->capture_default_str();
    enc->add_option("--key", eo.key, "256-bit key, 64 hex digits")->required();
    enc->add_option("--nonce", eo.nonce, "nonce hex: 16 digits (orig) or 24 (ietf)")
        ->required();
    enc->add_option("--counter", eo.counter, "starting block counter")
        ->capture_default_str();
    enc->add_option("--layout", eo.layout, "counter/nonce split")
        ->check(CLI::IsMember({"orig", "ietf"}))
        ->capture_default_str();
    enc->add_option("--check", eo.check,
                    "run a parity checker on every quarterround; one JSON verdict "
                    "line per block on stderr")
        ->check(CLI::IsMember({"classic", "gbpp"}));
    enc->add_option("--in", eo.in_path, "input file (default stdin)");
    enc->add_option("--out", eo.out_path, "output file (default stdout)");

    QrTraceOpts qo;
    CLI::App* qrt = app.add_subcommand("qr-trace",
                                       "run one quarterround and print every wire, "
                                       "tap, and checker verdict as JSON");
    qrt->add_option("--width", qo.width, "word width in bits [2,64]")
        ->capture_default_str();
    qrt->add_option("--a", qo.a, "input word a, hex")->required();
    qrt->add_option("--b", qo.b, "input word b, hex")->required();
    qrt->add_option("--c", qo.c, "input word c, hex")->required();
    qrt->add_option("--d", qo.d, "input word d, hex")->required();
    qrt->add_option("--fault", qo.faults,
                    "inject SIGNAL:MASKHEX (repeatable); input_block takes a packed "
                    "4w-bit mask");
    qrt->add_option("--schedule", qo.schedule, "rotation schedule R1,R2,R3,R4");

    VerifyOpts vo;
    CLI::App* ver = app.add_subcommand(
        "verify-identities", "check the parity identities the predictors rely on");
    ver->add_option("--width", vo.width, "word width in bits")->capture_default_str();
    ver->add_option("--mode", vo.mode, "exhaustive or random sampling")
        ->check(CLI::IsMember({"exhaustive", "random"}))
        ->capture_default_str();
    ver->add_option("--samples", vo.samples, "samples per suite in random mode")
        ->capture_default_str();
    ver->add_option("--seed", vo.seed, "sampling seed")->capture_default_str();
    ver->add_option("--suite", vo.suite, "run a single suite by name");

    CampaignOpts co;
    CLI::App* camp = app.add_subcommand(
        "campaign", "sweep fault injections per signal and report detection rates");
    camp->add_option("--width", co.width, "word width in bits")->capture_default_str();
    camp->add_option("--scheme", co.scheme, "checker scheme")
        ->check(CLI::IsMember({"classic", "gbpp"}))
        ->required();
    camp->add_option("--signals", co.signals, "comma list of signals, or 'all'")
        ->capture_default_str();
    camp->add_option("--errors", co.errors, "error mask policy")
        ->check(CLI::IsMember({"odd-exhaustive", "odd-random", "single-bit",
                               "even-random"}))
        ->capture_default_str();
    camp->add_option("--samples", co.samples,
                     "trials per signal under randomized policies");
    camp->add_option("--seed", co.seed, "campaign seed")->capture_default_str();
    camp->add_option("--out", co.out, "JSON report path (default stdout)")
        ->capture_default_str();
    camp->add_option("--csv", co.csv, "also write the per-signal table as CSV");
    camp->add_flag("--expect-paper", co.expect,
                   "grade measured rates against the documented detection profile; "
                   "exit 1 on any deviation");
    camp->add_option("--jobs", co.jobs, "worker threads (report independent of N)")
        ->envname("PARQR_JOBS")
        ->capture_default_str();

    GatesOpts go;
    CLI::App* gat = app.add_subcommand("gates", "checker gate-count accounting");
    gat->add_option("--width", go.width, "word width in bits")->capture_default_str();
    gat->add_option("--scheme", go.scheme, "checker scheme")
        ->check(CLI::IsMember({"classic", "gbpp"}))
        ->required();
    gat->add_flag("--json", go.json_out, "emit JSON instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (enc->parsed()) return cmd_encrypt(eo);
        if (qrt->parsed()) return cmd_qr_trace(qo);
        if (ver->parsed()) return cmd_verify(vo);
        if (camp->parsed()) return cmd_campaign(co);
        if (gat->parsed()) return cmd_gates(go);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
