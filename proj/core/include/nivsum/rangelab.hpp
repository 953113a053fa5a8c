#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nivsum/decompose.hpp"

namespace nivsum {

// Flat bit array indexed by value. Word-aligned chunking keeps parallel
// sieving race-free without atomics.
class Bitset {
public:
    explicit Bitset(uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(uint64_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    uint64_t size() const { return size_; }
    uint64_t count() const;

private:
    uint64_t size_;
    std::vector<uint64_t> words_;
};

enum class MemberKind { niven, zuckerman };

const char* kind_name(MemberKind k);
MemberKind kind_from_name(const std::string& name);

// Membership bit array over [1, N]: bit n set iff n is Niven (resp.
// Zuckerman) in base g. Digit state is carried incrementally (odometer), no
// per-n digit extraction. Chunks re-derive their starting digits and are
// 64-aligned, so any worker count produces identical bits.
Bitset member_sieve(uint64_t N, uint32_t g, MemberKind kind, unsigned workers = 1);
Bitset niven_sieve(uint64_t N, uint32_t g, unsigned workers = 1);

std::vector<uint64_t> collect_members(const Bitset& bits);

struct SieveReport {
    uint32_t g = 10;
    uint64_t N = 0;
    uint32_t k = 1;
    MemberKind kind = MemberKind::niven;
    std::vector<uint64_t> exceptions;        // n not a sum of <= k members, ascending
    uint64_t niven_count = 0;                // members of the given kind <= N
    std::vector<uint64_t> trials_histogram;  // [t] = how many n needed t first-summand trials
    double wall_time_ms = 0.0;
};

struct VerifyRangeOptions {
    unsigned workers = 1;
    // Trials beyond this land in the histogram's last bucket; outcomes never
    // depend on it (the scan below is already exhaustive).
    uint64_t trial_cap = 64;
};

// For every n in [1, N], decide whether n is a sum of at most k members
// (repetition allowed). Strategy: membership bit, then ascending scan over
// candidate first summands a <= n/2 testing n - a by bit lookup (k <= 2), or
// over <= floor(k/2)-fold sums (k in {3, 4}). Every candidate exception is
// re-proven by exhaustive multiset enumeration before it is reported.
// k > 4 is rejected; building the pair table is only practical for sparse
// member sets, which covers every use this library has.
SieveReport verify_range(uint64_t N, uint32_t g, uint32_t k, MemberKind kind,
                         VerifyRangeOptions opts = {});

// Exact minimal number of members summing to n, if it is at most cap.
// Exhaustive multiset search against the same bit array.
std::optional<uint32_t> min_summands(uint64_t n, uint32_t cap, const Bitset& bits,
                                     const std::vector<uint64_t>& members);

struct NivenCount {
    uint64_t x = 0;
    uint64_t count = 0;
    double c_estimate = 0.0;  // count * ln(x) / x
};

NivenCount count_niven(uint64_t x, uint32_t g);

// Fraction of n in [1, N] lying in S_{q,r} (direct scan).
double s_class_density(const SClassParams& params, uint64_t N);

}  // namespace nivsum
