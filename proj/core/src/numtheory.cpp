#include "nivsum/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace nivsum {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t pow_mod(uint64_t a, uint64_t e, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

namespace {

bool miller_rabin_pass(uint64_t n, uint64_t a, uint64_t d, int s) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

uint64_t pollard_rho(uint64_t n) {
    // Floyd cycle detection; n is an odd composite. Retries with a fresh
    // polynomial when the walk degenerates.
    if (n % 2 == 0) return 2;
    for (uint64_t c = 1;; ++c) {
        auto f = [n, c](uint64_t x) {
            return static_cast<uint64_t>((static_cast<unsigned __int128>(x) * x + c) % n);
        };
        uint64_t x = 2, y = 2, d = 1;
        do {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        } while (d == 1);
        if (d != n) return d;
    }
}

void factor_rec(uint64_t n, std::map<uint64_t, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    uint64_t d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set decides primality for every n < 3.3 * 10^24.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!miller_rabin_pass(n, a, d, s)) return false;
    }
    return true;
}

std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    std::map<uint64_t, unsigned> acc;
    for (uint64_t p : {2ull, 3ull, 5ull}) {
        while (n % p == 0) {
            ++acc[p];
            n /= p;
        }
    }
    if (n > 1) factor_rec(n, acc);
    return {acc.begin(), acc.end()};
}

SquareDecomposition square_part(uint64_t g) {
    if (g < 2) throw std::invalid_argument("square_part: g must be >= 2");
    unsigned u = 0;
    for (;;) {
        uint64_t r = isqrt_u64(g);
        if (r * r != g) break;
        g = r;
        ++u;
    }
    return {g, u};
}

uint64_t multiplicative_order(uint64_t a, uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("multiplicative_order: p must be prime");
    a %= p;
    if (a == 0) throw std::invalid_argument("multiplicative_order: p divides a");
    uint64_t t = p - 1;
    for (const auto& [q, e] : factorize(p - 1)) {
        for (unsigned i = 0; i < e && t % q == 0 && pow_mod(a, t / q, p) == 1; ++i)
            t /= q;
    }
    return t;
}

bool is_primitive_root(uint64_t a, uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("is_primitive_root: p must be prime");
    if (a % p == 0) return false;
    return multiplicative_order(a, p) == p - 1;
}

namespace {

struct PrimRootMemo {
    uint64_t g0;
    std::unordered_map<uint64_t, bool> cache;
    bool operator()(uint64_t p) {
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
        bool v = is_primitive_root(g0, p);
        cache.emplace(p, v);
        return v;
    }
};

}  // namespace

std::optional<PrimeTriple> find_prime_triple(uint64_t target, uint64_t g0) {
    if (target < 3) throw std::invalid_argument("find_prime_triple: target must be >= 3");
    if (g0 < 2) throw std::invalid_argument("find_prime_triple: g0 must be >= 2");
    const uint64_t root = isqrt_u64(target);
    const uint64_t pmin = root + 1;  // p > floor(sqrt(target))
    if (3 * pmin > target) return std::nullopt;
    // For target >= 4 every candidate prime is odd, and three odd primes sum
    // to an odd number: even targets have no triple.
    if (target % 2 == 0 && pmin > 2) return std::nullopt;

    PrimRootMemo prim{g0, {}};
    for (uint64_t p1 = pmin; 3 * p1 <= target; ++p1) {
        if (!is_prime(p1) || !prim(p1)) continue;
        const uint64_t rem = target - p1;
        for (uint64_t p2 = p1; 2 * p2 <= rem; ++p2) {
            if (!is_prime(p2) || !prim(p2)) continue;
            const uint64_t p3 = rem - p2;
            if (is_prime(p3) && prim(p3))
                return PrimeTriple{p1, p2, p3, target, g0};
        }
    }
    return std::nullopt;
}

bool verify_triple(const PrimeTriple& t) {
    if (t.p1 > t.p2 || t.p2 > t.p3) return false;
    if (t.p1 + t.p2 + t.p3 != t.target) return false;
    const uint64_t root = isqrt_u64(t.target);
    for (uint64_t p : {t.p1, t.p2, t.p3}) {
        if (p <= root) return false;
        if (!is_prime(p)) return false;
        if (!is_primitive_root(t.g0, p)) return false;
    }
    return true;
}

}  // namespace nivsum
