#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nivsum/digits.hpp"
#include "nivsum/numtheory.hpp"
#include "nivsum/sumsets.hpp"

namespace nivsum {

// Pipeline stage at which a decomposition attempt stopped.
enum class Stage {
    precondition,      // input out of the supported regime (e.g. digit sum too small)
    s2_check,          // input fails the substring digit-sum scan
    prime_triple,      // no admissible prime triple for the reduced digit sum
    split_hypothesis,  // requested digit-sum split violates its hypotheses
    part_hypothesis,   // a split part misses the per-part requirements
    witness,           // subset-sum search found no witness for a part
    sample_budget,     // sampler exhausted its redraw budget
    internal,          // a theorem-backed step failed: indicates a bug
};

const char* stage_name(Stage s);

class DecomposeError : public std::runtime_error {
public:
    DecomposeError(Stage stage, const std::string& msg, int part = -1);
    Stage stage;
    int part;  // index of the offending part, or -1
};

enum class Method { direct, lemma_root, pipeline };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// How a certificate was produced. All fields optional; the verifier treats
// them as claims to cross-check, never as trusted facts.
struct Provenance {
    std::optional<std::array<uint64_t, 3>> triple;       // p1 <= p2 <= p3
    std::vector<std::size_t> split_lengths;              // digit lengths, low part first
    std::vector<std::vector<std::size_t>> witnesses;     // digit positions per part (part-local)
    std::vector<uint64_t> h_values;                      // powers subtracted per part
};

// Claim: input = sum of summands, every summand Niven in base g.
struct DecompositionCert {
    DigitString input;
    std::vector<DigitString> summands;
    Method method = Method::direct;
    std::optional<Provenance> provenance;
};

struct VerifyResult {
    bool ok = false;
    std::vector<std::string> reasons;
    explicit operator bool() const { return ok; }
};

// The digit-sum congruence class S_{q,r}: digit sum of n congruent to r mod q,
// and every qualifying substring window passes s2_scan.
struct SClassParams {
    uint64_t q = 1;
    int64_t r = 0;
    uint32_t g = 10;
};

// Cut n into parts whose digit sums track digit_sums: part i is the shortest
// low block of remaining digits whose digit sum reaches digit_sums[i], the
// last part takes the rest. Guarantees, for v parts:
//   |digit_sum(part_i) - digit_sums[i]| <= (g-2)(v-1),
// every part's top digit nonzero, and concat(parts) == n.
// Requires: every target positive, total equal to digit_sum(n), and
// digit_sums.back() > (g-2)(v-1). Violations throw DecomposeError
// (split_hypothesis) naming the failed inequality.
std::vector<DigitString> split(const DigitString& n, const std::vector<uint64_t>& digit_sums);

// Merge per-part certificates into one for the digit concatenation of the
// parts: summands of part i are shifted up by the total length of the parts
// below it (multiplication by a power of g preserves Niven-ness). Each part
// certificate is re-verified first. A single part is returned unchanged;
// merged results are tagged direct (the pipeline re-tags and attaches its own
// provenance).
DecompositionCert lift(const std::vector<DecompositionCert>& parts);

// Certificate for an input that is itself Niven: one summand, the input.
DecompositionCert direct_certificate(const DigitString& n);

// Decompose one part as (n - sum of g^j over j in J) + those powers, where J
// holds h = digit_sum(n) - p distinct digit positions with nonzero digit and
// sum of g^j congruent to n mod p. The main summand then has digit sum
// exactly p and is divisible by p, hence Niven; powers of g are Niven.
//
// guaranteed mode checks the hypotheses that make a witness a theorem:
//   (i) p prime and h in [4g, 8g],
//   (ii) g0 (square part of g) a primitive root mod p,
//   (iii) digit_sum(n) > max((g-1)*length(n)/3, 140 g^3),
// and treats an absent witness as internal contradiction. Best-effort mode
// (guaranteed = false) skips (i)-(iii) and reports an absent witness by
// returning nullopt.
std::optional<DecompositionCert> decompose_part(const DigitString& n, uint64_t p, bool guaranteed);

bool is_in_s_class(const DigitString& n, const SClassParams& params);

// Uniform digits with nonzero top digit, then at most q-1 of the lowest
// min(length-1, 8q) digits raised to force the digit-sum congruence, redrawn
// until s2_scan passes. Deterministic for a fixed seed. Requires
// length > params.q; throws DecomposeError (sample_budget) when max_redraws
// consecutive draws fail.
DigitString sample_s_class(const SClassParams& params, std::size_t length, uint64_t seed,
                           unsigned max_redraws = 64);

// Full pipeline: reduce the digit sum by 18g, find a prime triple over the
// reduction, split into three parts with targets p_i + 6g, decompose each
// part, and merge. Produces at most 24g + 3 summands. Throws DecomposeError
// with the failing stage.
DecompositionCert decompose(const DigitString& n);

// Re-derive every certificate claim from scratch: structural validity,
// Niven-ness of each summand, digit-wise summation with carries equal to the
// input, method-specific summand-count bounds, the prime-digit-sum shape of
// non-power summands for lemma_root/pipeline certificates, and full
// cross-checks of any provenance present.
VerifyResult verify_certificate(const DecompositionCert& cert);

// Admissible residue scan: which residues r' mod q admit prime triples for
// targets congruent to r' near a given scale. The pipeline default residue is
// the smallest one for which every sampled target succeeded (parity forces
// these to be odd).
inline constexpr uint64_t kCalibrationModulus = 420;

struct ResidueScan {
    uint32_t g = 0;
    uint64_t g0 = 0;
    uint64_t q = kCalibrationModulus;
    unsigned samples = 0;
    std::vector<std::pair<uint32_t, unsigned>> hits;  // (residue, successful samples)
    std::vector<uint32_t> admissible;                 // full-success residues, ascending
    std::optional<uint32_t> default_r_prime;
};

ResidueScan calibrate_residues(uint32_t g, uint64_t near_target, unsigned samples = 4);

}  // namespace nivsum
