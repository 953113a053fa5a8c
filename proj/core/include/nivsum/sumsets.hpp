#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nivsum {

// h distinct residues from a set A in F_p summing to target mod p.
struct SubsetWitness {
    uint64_t p;
    uint32_t target;
    std::vector<uint32_t> elements;  // ascending, distinct, subset of A
};

// Dias da Silva-Hamidoune lower bound on the number of h-fold restricted
// (distinct-summand) sums from a set of the given size in F_p:
// min(p, h*size - h^2 + 1), never below zero. h = 0 gives 1 (the empty sum).
uint64_t dsh_bound(uint64_t p, uint64_t set_size, uint64_t h);

// All values of sums of exactly h distinct elements of set, as sorted
// residues. Brute-force enumeration of every h-subset - its role is to be the
// obviously-correct oracle, so keep instances small (C(|set|, h) subsets are
// walked). set holds distinct residues mod p, p prime.
std::vector<uint32_t> h_fold_sumset(const std::vector<uint32_t>& set, uint32_t h, uint32_t p);

// A witness that target is an h-fold restricted sum from set, or absent when
// it is not (h > |set| is simply absent, not an error). Boolean DP over
// (elements taken, residue), O(|set| * h * p) time; elements are processed in
// ascending order and each DP cell records the first element that reached it,
// so the reconstructed witness is deterministic and byte-stable across runs.
// p must be prime (rejected otherwise); set must hold distinct residues < p.
std::optional<SubsetWitness> h_subset_sum(const std::vector<uint32_t>& set, uint32_t h,
                                          uint32_t target, uint32_t p);

// Re-check a witness against the set it claims to come from.
bool verify_witness(const SubsetWitness& w, const std::vector<uint32_t>& set, uint32_t h);

}  // namespace nivsum
