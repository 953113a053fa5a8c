// nivsum command line tool. Exit codes: 0 claim holds / success, 1 claim
// fails or certificate invalid, 2 usage error, 3 search exhausted.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nivsum/decompose.hpp"
#include "nivsum/digits.hpp"
#include "nivsum/rangelab.hpp"
#include "nivsum/serialization.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kClaimFails = 1;
constexpr int kUsage = 2;
constexpr int kExhausted = 3;

bool looks_decimal(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("input", "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Positional input: decimal literal for machine-size n, otherwise a path to
// a DigitString JSON file.
nivsum::DigitString load_input(const std::string& arg, uint32_t g) {
    if (looks_decimal(arg)) {
        const uint64_t n = std::stoull(arg);
        if (n == 0) throw CLI::ValidationError("input", "n must be positive");
        return nivsum::to_digits(n, g);
    }
    return nivsum::digit_string_from_json(slurp(arg));
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CLI::ValidationError("--out", "cannot write file: " + out_path);
    out << text;
}

int stage_exit_code(nivsum::Stage stage) {
    switch (stage) {
        case nivsum::Stage::prime_triple:
        case nivsum::Stage::witness:
        case nivsum::Stage::sample_budget:
            return kExhausted;
        default:
            return kClaimFails;
    }
}

// Best-effort single-shot decomposition: scan h = digit_sum - p upward and
// take the first prime p with a primitive root for which the subset search
// finds a witness. No hypothesis gating beyond primality.
std::optional<nivsum::DecompositionCert> best_effort_decompose(const nivsum::DigitString& n) {
    using namespace nivsum;
    const uint64_t s = n.digit_sum();
    if (is_niven(n)) return direct_certificate(n);
    const uint64_t g0 = square_part(n.base()).g0;
    const uint64_t hmax = std::min<uint64_t>(s - 1, 8 * static_cast<uint64_t>(n.base()));
    for (uint64_t h = 1; h <= hmax; ++h) {
        const uint64_t p = s - h;
        if (p < 2 || !is_prime(p) || !is_primitive_root(g0, p)) continue;
        if (auto cert = decompose_part(n, p, /*guaranteed=*/false)) return cert;
    }
    return std::nullopt;
}

int run_check(uint64_t n, uint32_t g, const std::string& kind) {
    const auto ds = nivsum::to_digits(n, g);
    const bool niv = nivsum::is_niven(ds);
    const bool zuck = nivsum::is_zuckerman(n, g);
    std::cout << "niven: " << (niv ? "true" : "false") << "\n"
              << "zuckerman: " << (zuck ? "true" : "false") << "\n";
    const bool claim = (kind == "zuckerman") ? zuck : niv;
    return claim ? kOk : kClaimFails;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Base-g Niven number toolkit: predicates, additive decompositions with "
                 "verifiable certificates, and range verification."};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "Niven/Zuckerman predicates for one number");
    uint64_t check_n = 0;
    uint32_t check_g = 10;
    std::string check_kind = "niven";
    check->add_option("n", check_n, "number to test (decimal)")->required();
    check->add_option("--g", check_g, "base")->check(CLI::Range(2u, 1u << 20));
    check->add_option("--kind", check_kind, "which predicate decides the exit code")
        ->check(CLI::IsMember({"niven", "zuckerman"}));

    // decompose
    auto* dec = app.add_subcommand(
        "decompose", "Write n as a sum of base-g Niven numbers, emitting a certificate");
    std::string dec_input;
    bool dec_best_effort = false;
    bool dec_from_sample = false;
    uint32_t dec_g = 10;
    std::size_t dec_len = 0;
    uint64_t dec_seed = 0;
    uint64_t dec_q = nivsum::kCalibrationModulus;
    int64_t dec_r = -1;
    int64_t dec_r_prime = -1;
    std::string dec_out;
    int dec_indent = -1;
    dec->add_option("input", dec_input, "decimal n, or path to a DigitString JSON file");
    dec->add_flag("--best-effort", dec_best_effort,
                  "single-block mode: scan h <= 8g without hypothesis gating");
    dec->add_flag("--from-sample", dec_from_sample,
                  "generate the input with sample_s_class instead of reading one");
    dec->add_option("--g", dec_g, "base")->check(CLI::Range(2u, 1u << 20));
    dec->add_option("--len", dec_len, "digit length for --from-sample");
    dec->add_option("--seed", dec_seed, "sampler seed for --from-sample");
    dec->add_option("--q", dec_q, "digit-sum modulus for --from-sample");
    dec->add_option("--r", dec_r, "digit-sum residue for --from-sample (default: calibrated)");
    dec->add_option("--r-prime", dec_r_prime,
                    "calibration residue r'; implies r = (r' + 18g) mod q");
    dec->add_option("--out", dec_out, "write the certificate here instead of stdout");
    dec->add_option("--indent", dec_indent, "pretty-print JSON with this indent");

    // verify-cert
    auto* vc = app.add_subcommand("verify-cert", "Re-verify a certificate file");
    std::string vc_file;
    vc->add_option("file", vc_file, "certificate JSON file")->required();

    // verify-range
    auto* vr = app.add_subcommand(
        "verify-range", "Check every n <= N is a sum of at most k members; exit 0 iff none fail");
    uint64_t vr_N = 0;
    uint32_t vr_k = 2;
    uint32_t vr_g = 10;
    std::string vr_kind = "niven";
    unsigned vr_workers = std::thread::hardware_concurrency();
    std::string vr_format = "text";
    std::string vr_out;
    vr->add_option("--N", vr_N, "range bound")->required();
    vr->add_option("--k", vr_k, "summand cap")->check(CLI::Range(1u, 4u))->required();
    vr->add_option("--g", vr_g, "base")->check(CLI::Range(2u, 1u << 20));
    vr->add_option("--kind", vr_kind, "member kind")
        ->check(CLI::IsMember({"niven", "zuckerman"}));
    vr->add_option("--workers", vr_workers, "worker threads");
    vr->add_option("--format", vr_format, "report format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    vr->add_option("--out", vr_out, "write the report here instead of stdout");

    // count
    auto* cnt = app.add_subcommand("count", "Niven counts and c-estimates, CSV rows");
    std::vector<uint64_t> cnt_x;
    uint32_t cnt_g = 10;
    std::string cnt_out;
    cnt->add_option("--x", cnt_x, "count Niven numbers <= x (repeatable)")->required();
    cnt->add_option("--g", cnt_g, "base")->check(CLI::Range(2u, 1u << 20));
    cnt->add_option("--out", cnt_out, "write CSV here instead of stdout");

    // density
    auto* den = app.add_subcommand(
        "density", "Density of the digit-sum class S_{q,r} in [1, N] vs. its lower bound");
    uint64_t den_q = 0;
    int64_t den_r = 0;
    uint64_t den_N = 0;
    uint32_t den_g = 10;
    den->add_option("--q", den_q, "digit-sum modulus")->required()->check(CLI::PositiveNumber);
    den->add_option("--r", den_r, "digit-sum residue")->required();
    den->add_option("--N", den_N, "range bound")->required()->check(CLI::PositiveNumber);
    den->add_option("--g", den_g, "base")->check(CLI::Range(2u, 1u << 20));

    // calibrate-residues
    auto* cal = app.add_subcommand(
        "calibrate-residues", "Scan residues r' mod 420 for prime-triple admissibility");
    uint32_t cal_g = 10;
    uint64_t cal_near = 6000;
    unsigned cal_samples = 4;
    cal->add_option("--g", cal_g, "base")->required()->check(CLI::Range(2u, 1u << 20));
    cal->add_option("--near", cal_near, "target scale for the scan");
    cal->add_option("--samples", cal_samples, "targets tried per residue")
        ->check(CLI::PositiveNumber);

    // selftest
    auto* st = app.add_subcommand("selftest", "Built-in property suites (sumsets, split, DP)");
    uint64_t st_seed = 12345;
    st->add_option("--seed", st_seed, "seed for the randomized suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    using namespace nivsum;
    try {
        if (*check) return run_check(check_n, check_g, check_kind);

        if (*dec) {
            if (!dec_from_sample && dec_input.empty()) {
                std::cerr << "decompose: give a positional input or --from-sample\n";
                return kUsage;
            }
            if (dec_from_sample && !dec_input.empty()) {
                std::cerr << "decompose: positional input and --from-sample are exclusive\n";
                return kUsage;
            }
            DigitString n(dec_g, {1});
            if (dec_from_sample) {
                if (dec_len == 0) {
                    std::cerr << "decompose: --from-sample requires --len\n";
                    return kUsage;
                }
                int64_t r = dec_r;
                if (dec_r_prime >= 0)
                    r = (dec_r_prime + 18 * static_cast<int64_t>(dec_g)) %
                        static_cast<int64_t>(dec_q);
                if (r < 0) {
                    // No residue given: calibrate near the expected digit sum.
                    const uint64_t scale =
                        std::max<uint64_t>(dec_len * (dec_g - 1) / 2, 18 * dec_g + 3);
                    const ResidueScan scan = calibrate_residues(dec_g, scale);
                    if (!scan.default_r_prime) {
                        std::cerr << "decompose: calibration found no admissible residue\n";
                        return kExhausted;
                    }
                    r = (*scan.default_r_prime + 18 * static_cast<int64_t>(dec_g)) %
                        static_cast<int64_t>(dec_q);
                    std::cerr << "calibrated r' = " << *scan.default_r_prime << ", using r = "
                              << r << "\n";
                }
                n = sample_s_class({dec_q, r, dec_g}, dec_len, dec_seed);
            } else {
                n = load_input(dec_input, dec_g);
            }

            DecompositionCert cert{n, {}, Method::direct, std::nullopt};
            if (dec_best_effort) {
                auto got = best_effort_decompose(n);
                if (!got) {
                    std::cerr << "decompose: no witness for any h <= 8g (best-effort)\n";
                    return kExhausted;
                }
                cert = std::move(*got);
            } else {
                cert = decompose(n);
            }
            const VerifyResult check_back = verify_certificate(cert);
            if (!check_back) {
                std::cerr << "decompose: produced certificate failed verification:\n";
                for (const auto& reason : check_back.reasons) std::cerr << "  " << reason << "\n";
                return kClaimFails;
            }
            emit(dec_out, certificate_to_json(cert, dec_indent));
            std::cerr << "summands: " << cert.summands.size() << " method: "
                      << method_name(cert.method) << "\n";
            return kOk;
        }

        if (*vc) {
            std::string text;
            try {
                text = slurp(vc_file);
            } catch (const CLI::ValidationError& e) {
                std::cerr << e.what() << "\n";
                return kUsage;
            }
            DecompositionCert cert{DigitString(10, {1}), {}, Method::direct, std::nullopt};
            try {
                cert = certificate_from_json(text);
            } catch (const std::exception& e) {
                std::cerr << "invalid: " << e.what() << "\n";
                return kClaimFails;
            }
            const VerifyResult res = verify_certificate(cert);
            if (!res) {
                std::cerr << "invalid:\n";
                for (const auto& reason : res.reasons) std::cerr << "  " << reason << "\n";
                return kClaimFails;
            }
            std::cout << "valid: " << cert.summands.size() << " summands, method "
                      << method_name(cert.method) << "\n";
            return kOk;
        }

        if (*vr) {
            if (vr_workers == 0) vr_workers = 1;
            const SieveReport rep =
                verify_range(vr_N, vr_g, vr_k, kind_from_name(vr_kind), {vr_workers});
            std::string text;
            if (vr_format == "json") {
                text = report_to_json(rep, 2);
            } else if (vr_format == "csv") {
                text = report_to_csv(rep);
            } else {
                std::ostringstream out;
                out << "kind " << vr_kind << " g " << rep.g << " N " << rep.N << " k " << rep.k
                    << "\nmembers: " << rep.niven_count << "\nexceptions: "
                    << rep.exceptions.size() << "\n";
                for (uint64_t e : rep.exceptions) out << "  " << e << "\n";
                out << "wall_time_ms: " << rep.wall_time_ms << "\n";
                text = out.str();
            }
            emit(vr_out, text);
            return rep.exceptions.empty() ? kOk : kClaimFails;
        }

        if (*cnt) {
            std::vector<NivenCount> rows;
            for (uint64_t x : cnt_x) rows.push_back(count_niven(x, cnt_g));
            emit(cnt_out, niven_counts_to_csv(rows));
            return kOk;
        }

        if (*den) {
            const double d = s_class_density({den_q, den_r, den_g}, den_N);
            // Lower bound 1/(2 g^(q+1)); computed in doubles, may underflow to
            // 0 for large q, which only weakens the claim being checked.
            const double bound =
                0.5 / std::pow(static_cast<double>(den_g), static_cast<double>(den_q) + 1.0);
            std::cout << "density: " << d << "\nlower_bound: " << bound << "\n";
            return d > bound ? kOk : kClaimFails;
        }

        if (*cal) {
            const ResidueScan scan = calibrate_residues(cal_g, cal_near, cal_samples);
            std::cout << "g " << scan.g << " g0 " << scan.g0 << " q " << scan.q << " samples "
                      << scan.samples << "\nadmissible:";
            for (uint32_t r : scan.admissible) std::cout << " " << r;
            std::cout << "\n";
            if (scan.default_r_prime) {
                std::cout << "default_r_prime: " << *scan.default_r_prime << "\n";
                return kOk;
            }
            std::cout << "default_r_prime: none\n";
            return kExhausted;
        }

        if (*st) {
            std::mt19937_64 rng(st_seed);
            int failures = 0;
            const auto suite = [&](const char* name, bool ok) {
                std::cout << (ok ? "[ok]   " : "[fail] ") << name << "\n";
                if (!ok) ++failures;
            };

            // Restricted-sumset bound, exhaustive over small primes.
            bool dsh_ok = true;
            for (uint32_t p : {2u, 3u, 5u, 7u}) {
                for (uint32_t mask = 0; mask < (1u << p) && dsh_ok; ++mask) {
                    std::vector<uint32_t> a;
                    for (uint32_t i = 0; i < p; ++i)
                        if (mask >> i & 1) a.push_back(i);
                    for (uint32_t h = 1; h <= a.size(); ++h) {
                        const auto fold = h_fold_sumset(a, h, p);
                        if (fold.size() < dsh_bound(p, a.size(), h)) { dsh_ok = false; break; }
                        if (a.size() * h >= p - 1 + h * h && fold.size() != p) {
                            dsh_ok = false;
                            break;
                        }
                    }
                }
            }
            suite("restricted sumset bound, exhaustive p <= 7", dsh_ok);

            // Split/concat identity on random instances.
            bool split_ok = true;
            for (int iter = 0; iter < 500 && split_ok; ++iter) {
                const uint32_t g = (iter % 2) ? 2 : 10;
                std::vector<uint32_t> digits(200 + rng() % 200);
                for (auto& d : digits) d = rng() % g;
                digits.back() = 1 + rng() % (g - 1);
                DigitString n(g, digits);
                const uint64_t s = n.digit_sum();
                if (s < 8) continue;
                const uint64_t s1 = 1 + rng() % (s / 4);
                const uint64_t s2 = 1 + rng() % (s / 4);
                const uint64_t s3 = s - s1 - s2;
                if (s3 <= (g > 2 ? (g - 2) * 2 : 0)) continue;
                const auto parts = split(n, {s1, s2, s3});
                DigitString back = parts[0];
                for (std::size_t i = 1; i < parts.size(); ++i) back = concat(back, parts[i]);
                if (!(back == n)) split_ok = false;
            }
            suite("split/concat identity, 500 random instances", split_ok);

            // Subset-sum witnesses verify.
            bool dp_ok = true;
            for (int iter = 0; iter < 200 && dp_ok; ++iter) {
                const uint32_t p = 101;
                std::vector<uint32_t> elems;
                for (uint32_t v = 0; v < p; ++v)
                    if (rng() % 3 == 0) elems.push_back(v);
                const uint32_t h = 1 + rng() % 5;
                if (elems.size() < h) continue;
                const uint32_t target = rng() % p;
                const auto w = h_subset_sum(elems, h, target, p);
                if (w && !verify_witness(*w, elems, h)) dp_ok = false;
            }
            suite("subset-sum DP witnesses verify, 200 instances", dp_ok);

            // End-to-end pipeline round trip at a small length.
            bool e2e_ok = false;
            try {
                const ResidueScan scan = calibrate_residues(2, 1000);
                if (scan.default_r_prime) {
                    const int64_t r = (*scan.default_r_prime + 36) % 420;
                    const DigitString n = sample_s_class({420, r, 2}, 2000, st_seed);
                    const DecompositionCert cert = decompose(n);
                    const DecompositionCert back =
                        certificate_from_json(certificate_to_json(cert));
                    e2e_ok = verify_certificate(back).ok &&
                             cert.summands.size() <= 24 * 2 + 3;
                }
            } catch (const std::exception& e) {
                std::cerr << "  e2e: " << e.what() << "\n";
            }
            suite("pipeline round trip, g=2 len=2000", e2e_ok);

            return failures == 0 ? kOk : kClaimFails;
        }
    } catch (const DecomposeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return stage_exit_code(e.stage);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kClaimFails;
    }
    return kUsage;
}
