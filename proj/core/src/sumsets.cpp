#include "nivsum/sumsets.hpp"

#include <algorithm>
#include <stdexcept>

#include "nivsum/numtheory.hpp"

namespace nivsum {

namespace {

std::vector<uint32_t> sorted_validated(const std::vector<uint32_t>& set, uint32_t p) {
    std::vector<uint32_t> els = set;
    std::sort(els.begin(), els.end());
    if (std::adjacent_find(els.begin(), els.end()) != els.end())
        throw std::invalid_argument("sumsets: set elements must be distinct");
    if (!els.empty() && els.back() >= p)
        throw std::invalid_argument("sumsets: set element out of range mod p");
    return els;
}

}  // namespace

uint64_t dsh_bound(uint64_t p, uint64_t set_size, uint64_t h) {
    if (h > set_size) throw std::invalid_argument("dsh_bound: h exceeds set size");
    // h*size - h^2 + 1, evaluated without wrapping: h <= size makes it >= 1,
    // but keep the clamp for safety.
    const unsigned __int128 prod = static_cast<unsigned __int128>(h) * set_size + 1;
    const unsigned __int128 sq = static_cast<unsigned __int128>(h) * h;
    if (prod <= sq) return 0;
    const unsigned __int128 v = prod - sq;
    return static_cast<uint64_t>(std::min<unsigned __int128>(v, p));
}

std::vector<uint32_t> h_fold_sumset(const std::vector<uint32_t>& set, uint32_t h, uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("h_fold_sumset: p must be prime");
    std::vector<uint32_t> els = sorted_validated(set, p);
    if (h > els.size()) return {};
    std::vector<uint8_t> hit(p, 0);
    // Depth-first walk of all h-subsets.
    std::vector<uint32_t> stack;
    auto rec = [&](auto&& self, std::size_t start, uint32_t remaining, uint32_t partial) -> void {
        if (remaining == 0) {
            hit[partial] = 1;
            return;
        }
        for (std::size_t i = start; i + remaining <= els.size(); ++i) {
            uint32_t next = partial + els[i];
            if (next >= p) next -= p;
            self(self, i + 1, remaining - 1, next);
        }
    };
    rec(rec, 0, h, 0);
    std::vector<uint32_t> out;
    for (uint32_t t = 0; t < p; ++t)
        if (hit[t]) out.push_back(t);
    return out;
}

std::optional<SubsetWitness> h_subset_sum(const std::vector<uint32_t>& set, uint32_t h,
                                          uint32_t target, uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("h_subset_sum: p must be prime");
    std::vector<uint32_t> els = sorted_validated(set, p);
    target %= p;
    if (h > els.size()) return std::nullopt;

    // reach[j*p + t]: some j distinct elements of a prefix of els sum to t.
    // setter[j*p + t]: index of the element whose processing first set the
    // cell (-1 if unset). Cells are never overwritten, so backtraces are
    // reproducible.
    const std::size_t rows = static_cast<std::size_t>(h) + 1;
    if (static_cast<unsigned __int128>(rows) * p > (1u << 31))
        throw std::invalid_argument("h_subset_sum: instance too large ((h+1)*p cells)");
    std::vector<uint8_t> reach(rows * p, 0);
    std::vector<int32_t> setter(rows * p, -1);
    reach[0] = 1;  // empty sum

    const std::size_t goal = static_cast<std::size_t>(h) * p + target;
    for (std::size_t idx = 0; idx < els.size() && !reach[goal]; ++idx) {
        const uint32_t e = els[idx];
        const uint32_t jmax = static_cast<uint32_t>(std::min<std::size_t>(idx + 1, h));
        for (uint32_t j = jmax; j >= 1; --j) {
            const std::size_t prev = static_cast<std::size_t>(j - 1) * p;
            const std::size_t cur = static_cast<std::size_t>(j) * p;
            for (uint32_t t = 0; t < p; ++t) {
                if (!reach[prev + t]) continue;
                uint32_t t2 = t + e;
                if (t2 >= p) t2 -= p;
                if (!reach[cur + t2]) {
                    reach[cur + t2] = 1;
                    setter[cur + t2] = static_cast<int32_t>(idx);
                }
            }
        }
    }
    if (!reach[goal]) return std::nullopt;

    SubsetWitness w{p, target, {}};
    uint32_t j = h, t = target;
    while (j > 0) {
        const int32_t idx = setter[static_cast<std::size_t>(j) * p + t];
        const uint32_t e = els[static_cast<std::size_t>(idx)];
        w.elements.push_back(e);
        t = (t + p - e) % p;
        --j;
    }
    std::sort(w.elements.begin(), w.elements.end());
    return w;
}

bool verify_witness(const SubsetWitness& w, const std::vector<uint32_t>& set, uint32_t h) {
    if (w.elements.size() != h) return false;
    std::vector<uint32_t> els = w.elements;
    std::sort(els.begin(), els.end());
    if (std::adjacent_find(els.begin(), els.end()) != els.end()) return false;
    std::vector<uint32_t> pool = set;
    std::sort(pool.begin(), pool.end());
    if (!std::includes(pool.begin(), pool.end(), els.begin(), els.end())) return false;
    uint64_t sum = 0;
    for (uint32_t e : els) sum = (sum + e) % w.p;
    return sum == w.target % w.p;
}

}  // namespace nivsum
