#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace nivsum {

// g written as g0^(2^u) with g0 not a perfect square. g0 is what matters for
// primitive-root conditions: if g0 generates F_p*, powers of g still generate
// at least the index-2^u subgroup, which is all the structure needed here.
struct SquareDecomposition {
    uint64_t g0;
    unsigned u;
};

// Three primes, each above floor(sqrt(target)), summing to target, with g0 a
// primitive root modulo each. p1 <= p2 <= p3.
struct PrimeTriple {
    uint64_t p1, p2, p3;
    uint64_t target;
    uint64_t g0;
};

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t a, uint64_t e, uint64_t m);
uint64_t isqrt_u64(uint64_t n);

// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime(uint64_t n);

// Prime factorization (Pollard rho + Miller-Rabin), factors ascending.
std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n);

SquareDecomposition square_part(uint64_t g);

// Order of a in F_p* (p prime, p does not divide a).
uint64_t multiplicative_order(uint64_t a, uint64_t p);

// True iff a generates F_p*. For p = 2 every odd a qualifies.
bool is_primitive_root(uint64_t a, uint64_t p);

// Lexicographically smallest admissible triple, or absent if none exists
// (e.g. every even target >= 4: candidates above sqrt are odd, and three odd
// primes sum to an odd number). target >= 3. Exhaustive over p1 <= target/3.
std::optional<PrimeTriple> find_prime_triple(uint64_t target, uint64_t g0);

// Re-check every PrimeTriple invariant from scratch.
bool verify_triple(const PrimeTriple& t);

}  // namespace nivsum
