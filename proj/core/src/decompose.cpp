#include "nivsum/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace nivsum {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::precondition: return "precondition";
        case Stage::s2_check: return "s2_check";
        case Stage::prime_triple: return "prime_triple";
        case Stage::split_hypothesis: return "split_hypothesis";
        case Stage::part_hypothesis: return "part_hypothesis";
        case Stage::witness: return "witness";
        case Stage::sample_budget: return "sample_budget";
        case Stage::internal: return "internal";
    }
    return "unknown";
}

DecomposeError::DecomposeError(Stage stage_, const std::string& msg, int part_)
    : std::runtime_error(std::string("[") + stage_name(stage_) +
                         (part_ >= 0 ? " part " + std::to_string(part_) : "") + "] " + msg),
      stage(stage_),
      part(part_) {}

const char* method_name(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::lemma_root: return "lemma_root";
        case Method::pipeline: return "pipeline";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "direct") return Method::direct;
    if (name == "lemma_root") return Method::lemma_root;
    if (name == "pipeline") return Method::pipeline;
    throw std::invalid_argument("unknown certificate method: " + name);
}

std::vector<DigitString> split(const DigitString& n, const std::vector<uint64_t>& digit_sums) {
    const uint64_t g = n.base();
    const std::size_t v = digit_sums.size();
    if (v == 0)
        throw DecomposeError(Stage::split_hypothesis, "no digit-sum targets given");
    uint64_t total = 0;
    for (uint64_t s : digit_sums) {
        if (s == 0)
            throw DecomposeError(Stage::split_hypothesis, "digit-sum targets must be positive");
        total += s;
    }
    if (total != n.digit_sum()) {
        std::ostringstream os;
        os << "digit-sum targets sum to " << total << ", digit sum of n is " << n.digit_sum();
        throw DecomposeError(Stage::split_hypothesis, os.str());
    }
    const uint64_t slack = (g - 2) * (static_cast<uint64_t>(v) - 1);
    if (digit_sums.back() <= slack) {
        std::ostringstream os;
        os << "last target " << digit_sums.back() << " not above (g-2)(v-1) = " << slack;
        throw DecomposeError(Stage::split_hypothesis, os.str());
    }

    // Part i ends at the first digit where the running sum reaches its
    // target; that digit is nonzero (it strictly increased the sum), so every
    // part keeps a nonzero top digit.
    const auto& d = n.digits();
    std::vector<DigitString> parts;
    parts.reserve(v);
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < v; ++i) {
        uint64_t acc = 0;
        const std::size_t start = pos;
        while (pos < d.size() && acc < digit_sums[i]) acc += d[pos++];
        if (acc < digit_sums[i])
            throw DecomposeError(Stage::internal, "split ran out of digits; hypotheses violated");
        parts.emplace_back(n.base(), std::vector<uint32_t>(d.begin() + start, d.begin() + pos));
    }
    if (pos >= d.size())
        throw DecomposeError(Stage::internal, "split left an empty last part");
    parts.emplace_back(n.base(), std::vector<uint32_t>(d.begin() + pos, d.end()));
    return parts;
}

DecompositionCert lift(const std::vector<DecompositionCert>& parts) {
    if (parts.empty()) throw std::invalid_argument("lift: no parts");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        VerifyResult r = verify_certificate(parts[i]);
        if (!r)
            throw std::invalid_argument("lift: part " + std::to_string(i) +
                                        " certificate fails verification: " + r.reasons.front());
        if (parts[i].input.base() != parts[0].input.base())
            throw std::invalid_argument("lift: parts disagree on base");
    }
    if (parts.size() == 1) return parts[0];

    const uint32_t g = parts[0].input.base();
    DecompositionCert out{parts[0].input, {}, Method::direct, std::nullopt};
    std::vector<uint32_t> all_digits;
    std::size_t offset = 0;
    for (const auto& part : parts) {
        for (const auto& s : part.summands) {
            std::vector<uint32_t> shifted(offset, 0);
            shifted.insert(shifted.end(), s.digits().begin(), s.digits().end());
            out.summands.emplace_back(g, std::move(shifted));
        }
        all_digits.insert(all_digits.end(), part.input.digits().begin(), part.input.digits().end());
        offset += part.input.length();
    }
    out.input = DigitString(g, std::move(all_digits));
    return out;
}

DecompositionCert direct_certificate(const DigitString& n) {
    if (!is_niven(n))
        throw std::invalid_argument("direct_certificate: input is not Niven");
    return DecompositionCert{n, {n}, Method::direct, std::nullopt};
}

std::optional<DecompositionCert> decompose_part(const DigitString& n, uint64_t p, bool guaranteed) {
    const uint64_t g = n.base();
    const uint64_t s = n.digit_sum();
    if (p < 2 || !is_prime(p))
        throw DecomposeError(Stage::part_hypothesis, "p = " + std::to_string(p) + " is not prime");
    if (p > s)
        throw DecomposeError(Stage::part_hypothesis, "digit sum below p (h would be negative)");
    const uint64_t h = s - p;
    const SquareDecomposition sq = square_part(g);

    if (guaranteed) {
        if (h < 4 * g || h > 8 * g) {
            std::ostringstream os;
            os << "(i) h = " << h << " outside [4g, 8g] = [" << 4 * g << ", " << 8 * g << "]";
            throw DecomposeError(Stage::part_hypothesis, os.str());
        }
        if (!is_primitive_root(sq.g0, p)) {
            std::ostringstream os;
            os << "(ii) g0 = " << sq.g0 << " is not a primitive root mod " << p;
            throw DecomposeError(Stage::part_hypothesis, os.str());
        }
        if (3 * static_cast<unsigned __int128>(s) <=
            static_cast<unsigned __int128>(g - 1) * n.length())
            throw DecomposeError(Stage::part_hypothesis,
                                 "(iii) digit sum not above (g-1) * length / 3");
        if (static_cast<unsigned __int128>(s) <=
            140 * static_cast<unsigned __int128>(g) * g * g)
            throw DecomposeError(Stage::part_hypothesis, "(iii) digit sum not above 140 g^3");
    }
    if (p > (1u << 30))
        throw DecomposeError(Stage::part_hypothesis, "p too large for the witness search");

    // Residues g^i mod p over positions with nonzero digit; ties resolved to
    // the smallest position so witnesses map back deterministically.
    const auto& d = n.digits();
    std::map<uint32_t, std::size_t> position_of;
    uint64_t gi = 1 % p;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] != 0) position_of.try_emplace(static_cast<uint32_t>(gi), i);
        gi = mul_mod(gi, g, p);
    }
    std::vector<uint32_t> residues;
    residues.reserve(position_of.size());
    for (const auto& [r, pos] : position_of) residues.push_back(r);

    const uint32_t target = static_cast<uint32_t>(mod_eval(n, p));
    if (h > residues.size()) {
        if (guaranteed)
            throw DecomposeError(Stage::internal,
                                 "hypotheses hold but fewer distinct residues than h");
        return std::nullopt;
    }
    auto wit = h_subset_sum(residues, static_cast<uint32_t>(h), target, static_cast<uint32_t>(p));
    if (!wit) {
        if (guaranteed)
            throw DecomposeError(Stage::internal,
                                 "hypotheses hold but the subset search found no witness");
        return std::nullopt;
    }

    std::vector<std::size_t> positions;
    positions.reserve(wit->elements.size());
    for (uint32_t e : wit->elements) positions.push_back(position_of.at(e));
    std::sort(positions.begin(), positions.end());

    DecompositionCert cert{n, {}, Method::lemma_root, Provenance{}};
    if (h == 0) {
        cert.summands.push_back(n);
    } else {
        DigitString main = subtract_powers(n, positions);
        assert(main.digit_sum() == p);
        assert(mod_eval(main, p) == 0);
        cert.summands.push_back(std::move(main));
        for (std::size_t j : positions)
            cert.summands.push_back(power_of_base(static_cast<uint32_t>(g), j));
    }
    cert.provenance->witnesses.push_back(std::move(positions));
    cert.provenance->h_values.push_back(h);
    return cert;
}

bool is_in_s_class(const DigitString& n, const SClassParams& params) {
    if (params.q == 0) throw std::invalid_argument("is_in_s_class: q must be >= 1");
    if (n.base() != params.g) throw std::invalid_argument("is_in_s_class: base mismatch");
    const uint64_t q = params.q;
    const uint64_t want = static_cast<uint64_t>(((params.r % static_cast<int64_t>(q)) + q) % q);
    if (n.digit_sum() % q != want) return false;
    return s2_scan(n);
}

namespace {

// mt19937_64 is bit-exact everywhere; std::uniform_int_distribution is not,
// so draw below a bound by rejection to keep outputs reproducible across
// standard libraries.
uint64_t draw_below(std::mt19937_64& rng, uint64_t bound) {
    const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
    for (;;) {
        uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

}  // namespace

DigitString sample_s_class(const SClassParams& params, std::size_t length, uint64_t seed,
                           unsigned max_redraws) {
    const uint32_t g = params.g;
    const uint64_t q = params.q;
    if (g < 2) throw std::invalid_argument("sample_s_class: base must be >= 2");
    if (q == 0) throw std::invalid_argument("sample_s_class: q must be >= 1");
    if (length <= q)
        throw std::invalid_argument("sample_s_class: length must exceed q");
    const uint64_t want = static_cast<uint64_t>(((params.r % static_cast<int64_t>(q)) + q) % q);
    const std::size_t adjust_span = std::min<std::size_t>(length - 1, 8 * q);

    std::mt19937_64 rng(seed);
    for (unsigned attempt = 0; attempt < max_redraws; ++attempt) {
        std::vector<uint32_t> d(length);
        for (std::size_t i = 0; i + 1 < length; ++i)
            d[i] = static_cast<uint32_t>(draw_below(rng, g));
        d[length - 1] = 1 + static_cast<uint32_t>(draw_below(rng, g - 1));
        uint64_t s = 0;
        for (uint32_t x : d) s += x;

        // Raise low digits until the digit sum hits the wanted residue.
        // Raising only can't hurt the substring scan; spreading over 8q
        // positions keeps any one window's density near the drawn one.
        uint64_t delta = (want + q - s % q) % q;
        for (std::size_t i = 0; i < adjust_span && delta > 0; ++i) {
            const uint64_t room = g - 1 - d[i];
            const uint64_t add = std::min<uint64_t>(room, delta);
            d[i] += static_cast<uint32_t>(add);
            delta -= add;
        }
        if (delta > 0) continue;  // not enough headroom in this draw
        DigitString out(g, std::move(d));
        if (s2_scan(out)) return out;
    }
    throw DecomposeError(Stage::sample_budget,
                         "no draw passed the scan within " + std::to_string(max_redraws) +
                             " attempts");
}

DecompositionCert decompose(const DigitString& n) {
    const uint64_t g = n.base();
    const uint64_t s = n.digit_sum();
    if (s < 18 * g + 3) {
        std::ostringstream os;
        os << "digit sum " << s << " leaves no room for the 18g reduction (need >= " << 18 * g + 3
           << ")";
        throw DecomposeError(Stage::precondition, os.str());
    }
    if (!s2_scan(n))
        throw DecomposeError(Stage::s2_check, "input fails the substring digit-sum scan");

    const SquareDecomposition sq = square_part(g);
    const uint64_t reduced = s - 18 * g;
    auto triple = find_prime_triple(reduced, sq.g0);
    if (!triple) {
        std::ostringstream os;
        os << "no admissible prime triple for reduced digit sum " << reduced << " (g0 = " << sq.g0
           << ")";
        throw DecomposeError(Stage::prime_triple, os.str());
    }

    const std::array<uint64_t, 3> primes{triple->p1, triple->p2, triple->p3};
    std::vector<uint64_t> targets;
    for (uint64_t p : primes) targets.push_back(p + 6 * g);
    std::vector<DigitString> parts = split(n, targets);

    const std::size_t kmin = s2_min_window(n.length());
    std::vector<DecompositionCert> certs;
    Provenance prov;
    prov.triple = primes;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const uint64_t ps = parts[i].digit_sum();
        if (ps < primes[i])
            throw DecomposeError(Stage::part_hypothesis, "part digit sum fell below its prime",
                                 static_cast<int>(i));
        const uint64_t h = ps - primes[i];
        if (h < 4 * g || h > 8 * g) {
            std::ostringstream os;
            os << "h = " << h << " outside [4g, 8g]";
            throw DecomposeError(Stage::part_hypothesis, os.str(), static_cast<int>(i));
        }
        if (parts[i].length() >= kmin &&
            3 * static_cast<unsigned __int128>(ps) <=
                static_cast<unsigned __int128>(g - 1) * parts[i].length())
            throw DecomposeError(Stage::part_hypothesis,
                                 "part violates the inherited substring bound",
                                 static_cast<int>(i));
        auto cert = decompose_part(parts[i], primes[i], /*guaranteed=*/false);
        if (!cert)
            throw DecomposeError(Stage::witness, "no subset witness for part",
                                 static_cast<int>(i));
        prov.split_lengths.push_back(parts[i].length());
        prov.witnesses.push_back(cert->provenance->witnesses.front());
        prov.h_values.push_back(h);
        certs.push_back(std::move(*cert));
    }

    DecompositionCert merged = lift(certs);
    if (!(merged.input == n))
        throw DecomposeError(Stage::internal, "merged certificate input differs from n");
    merged.method = Method::pipeline;
    merged.provenance = std::move(prov);
    if (merged.summands.size() > 24 * g + 3)
        throw DecomposeError(Stage::internal, "summand count exceeds 24g + 3");
    return merged;
}

namespace {

void add_reason(VerifyResult& r, const std::string& msg) { r.reasons.push_back(msg); }

uint64_t digits_mod(const std::vector<uint32_t>& d, uint64_t g, uint64_t p) {
    uint64_t r = 0;
    for (std::size_t i = d.size(); i-- > 0;)
        r = static_cast<uint64_t>((static_cast<unsigned __int128>(r) * g + d[i]) % p);
    return r;
}

// Check one witness claim against a digit block: positions distinct, inside
// the block, addressing nonzero digits, with sum of g^j congruent to the
// block value mod p.
bool witness_matches_block(const std::vector<std::size_t>& positions,
                           const std::vector<uint32_t>& block, uint64_t g, uint64_t p) {
    std::vector<std::size_t> js = positions;
    std::sort(js.begin(), js.end());
    if (std::adjacent_find(js.begin(), js.end()) != js.end()) return false;
    uint64_t sum_mod = 0;
    for (std::size_t j : js) {
        if (j >= block.size() || block[j] == 0) return false;
        sum_mod = (sum_mod + pow_mod(g % p, j, p)) % p;
    }
    return sum_mod == digits_mod(block, g, p);
}

void verify_provenance(const DecompositionCert& cert, const Provenance& prov, VerifyResult& res) {
    const uint32_t g = cert.input.base();
    const uint64_t g0 = square_part(g).g0;

    std::vector<std::size_t> power_exps;
    std::vector<std::size_t> nonpower_idx;
    for (std::size_t i = 0; i < cert.summands.size(); ++i) {
        if (auto e = power_exponent(cert.summands[i]))
            power_exps.push_back(*e);
        else
            nonpower_idx.push_back(i);
    }
    std::sort(power_exps.begin(), power_exps.end());

    if (cert.method == Method::pipeline) {
        if (!prov.triple) {
            add_reason(res, "pipeline provenance lacks a prime triple");
            return;
        }
        const auto& t = *prov.triple;
        const uint64_t s = cert.input.digit_sum();
        if (s < 18ull * g + 3) {
            add_reason(res, "input digit sum below the pipeline minimum");
            return;
        }
        if (!verify_triple(PrimeTriple{t[0], t[1], t[2], s - 18ull * g, g0}))
            add_reason(res, "provenance prime triple fails re-verification");
        if (prov.split_lengths.size() != 3 || prov.witnesses.size() != 3 ||
            prov.h_values.size() != 3) {
            add_reason(res, "pipeline provenance must carry three parts");
            return;
        }
        std::size_t total_len = 0;
        for (std::size_t l : prov.split_lengths) total_len += l;
        if (total_len != cert.input.length() ||
            *std::min_element(prov.split_lengths.begin(), prov.split_lengths.end()) == 0) {
            add_reason(res, "split lengths do not tile the input");
            return;
        }

        const auto& d = cert.input.digits();
        std::vector<std::size_t> expected_powers;
        std::size_t offset = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            const std::size_t len = prov.split_lengths[i];
            const std::vector<uint32_t> block(d.begin() + offset, d.begin() + offset + len);
            const std::string tag = "part " + std::to_string(i);
            if (block.back() == 0) add_reason(res, tag + " has a zero top digit");
            uint64_t psum = 0;
            for (uint32_t x : block) psum += x;
            const uint64_t h = prov.h_values[i];
            if (psum != t[i] + h) add_reason(res, tag + " digit sum is not p + h");
            if (h < 4ull * g || h > 8ull * g) add_reason(res, tag + " h outside [4g, 8g]");
            if (prov.witnesses[i].size() != h)
                add_reason(res, tag + " witness size differs from h");
            else if (!witness_matches_block(prov.witnesses[i], block, g, t[i]))
                add_reason(res, tag + " witness does not match the digit block");
            for (std::size_t j : prov.witnesses[i]) expected_powers.push_back(j + offset);
            offset += len;
        }
        std::sort(expected_powers.begin(), expected_powers.end());
        if (expected_powers != power_exps)
            add_reason(res, "power summands do not match the witness positions");
        if (nonpower_idx.size() != 3) {
            add_reason(res, "pipeline certificate should have exactly three non-power summands");
        } else {
            std::vector<uint64_t> sums, want{t[0], t[1], t[2]};
            for (std::size_t i : nonpower_idx) sums.push_back(cert.summands[i].digit_sum());
            std::sort(sums.begin(), sums.end());
            std::sort(want.begin(), want.end());
            if (sums != want) add_reason(res, "main summand digit sums do not match the triple");
        }
    } else if (cert.method == Method::lemma_root) {
        if (prov.witnesses.size() != 1 || prov.h_values.size() != 1) {
            add_reason(res, "lemma_root provenance must carry exactly one witness");
            return;
        }
        const uint64_t h = prov.h_values[0];
        const auto& J = prov.witnesses[0];
        if (J.size() != h) {
            add_reason(res, "witness size differs from h");
            return;
        }
        if (h > 8ull * g) add_reason(res, "h exceeds 8g");
        const uint64_t s = cert.input.digit_sum();
        if (s <= h) {
            add_reason(res, "h leaves no digit sum for the main summand");
            return;
        }
        const uint64_t p = s - h;
        if (!is_prime(p))
            add_reason(res, "implied p = digit_sum - h is not prime");
        else if (!witness_matches_block(J, cert.input.digits(), g, p))
            add_reason(res, "witness does not match the input");
        std::vector<std::size_t> js = J;
        std::sort(js.begin(), js.end());
        if (js != power_exps)
            add_reason(res, "power summands do not match the witness positions");
    }
    // direct certificates carry no structured provenance to cross-check
}

bool summands_add_up(const DecompositionCert& cert) {
    const uint32_t g = cert.input.base();
    std::size_t width = cert.input.length();
    for (const auto& s : cert.summands) width = std::max(width, s.length());
    std::vector<uint64_t> acc(width, 0);
    for (const auto& s : cert.summands)
        for (std::size_t i = 0; i < s.length(); ++i) acc[i] += s.digits()[i];
    uint64_t carry = 0;
    const auto& d = cert.input.digits();
    for (std::size_t i = 0; i < width; ++i) {
        const uint64_t total = acc[i] + carry;
        const uint64_t digit = total % g;
        carry = total / g;
        const uint64_t want = i < d.size() ? d[i] : 0;
        if (digit != want) return false;
    }
    return carry == 0;
}

}  // namespace

VerifyResult verify_certificate(const DecompositionCert& cert) {
    VerifyResult res;
    const uint32_t g = cert.input.base();
    const uint64_t g0 = square_part(g).g0;

    if (cert.summands.empty()) add_reason(res, "certificate has no summands");
    for (std::size_t i = 0; i < cert.summands.size(); ++i) {
        const auto& s = cert.summands[i];
        if (s.base() != g) {
            add_reason(res, "summand " + std::to_string(i) + " uses a different base");
            continue;
        }
        if (!is_niven(s))
            add_reason(res, "summand " + std::to_string(i) + " is not Niven");
    }
    if (!summands_add_up(cert))
        add_reason(res, "summands do not add up to the input");

    const std::size_t count = cert.summands.size();
    if (cert.method == Method::pipeline && count > 24 * static_cast<std::size_t>(g) + 3)
        add_reason(res, "pipeline certificate exceeds 24g + 3 summands");
    if (cert.method == Method::lemma_root && count > 8 * static_cast<std::size_t>(g) + 1)
        add_reason(res, "lemma_root certificate exceeds 8g + 1 summands");

    // lemma_root/pipeline certificates carry extra structure: every summand
    // is either a power of g or has prime digit sum with g0 a primitive root
    // modulo it (that is what makes them reusable as generator elements).
    if (cert.method != Method::direct) {
        for (std::size_t i = 0; i < cert.summands.size(); ++i) {
            const auto& s = cert.summands[i];
            if (s.base() != g || power_exponent(s)) continue;
            const uint64_t ds = s.digit_sum();
            if (!is_prime(ds))
                add_reason(res, "summand " + std::to_string(i) +
                                    " is neither a base power nor of prime digit sum");
            else if (!is_primitive_root(g0, ds))
                add_reason(res, "summand " + std::to_string(i) +
                                    " digit sum lacks g0 as a primitive root");
        }
    }

    if (cert.provenance) verify_provenance(cert, *cert.provenance, res);

    res.ok = res.reasons.empty();
    return res;
}

ResidueScan calibrate_residues(uint32_t g, uint64_t near_target, unsigned samples) {
    if (samples == 0) throw std::invalid_argument("calibrate_residues: samples must be >= 1");
    ResidueScan scan;
    scan.g = g;
    scan.g0 = square_part(g).g0;
    scan.samples = samples;
    const uint64_t q = scan.q;
    const uint64_t base_k = near_target > q * (samples / 2 + 1)
                                ? (near_target / q) - samples / 2
                                : 1;
    for (uint32_t r = 0; r < q; ++r) {
        unsigned ok = 0;
        for (unsigned j = 0; j < samples; ++j) {
            const uint64_t target = r + q * (base_k + j);
            if (target < 3) continue;
            if (find_prime_triple(target, scan.g0)) ++ok;
        }
        scan.hits.emplace_back(r, ok);
        if (ok == samples) scan.admissible.push_back(r);
    }
    if (!scan.admissible.empty()) scan.default_r_prime = scan.admissible.front();
    return scan;
}

}  // namespace nivsum
