#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nivsum/numtheory.hpp"
#include "oracles.hpp"

using namespace nivsum;

TEST_SUITE("numtheory") {

    TEST_CASE("mul_mod and pow_mod near the 64-bit edge") {
        const uint64_t m = 0xfffffffffffffff1ull;
        CHECK(mul_mod(m - 1, m - 1, m) == 1);  // (-1)^2
        CHECK(pow_mod(2, 64, m) == ((unsigned __int128)1 << 64) % m);
        CHECK(pow_mod(3, 0, 7) == 1);
        CHECK(pow_mod(10, 6, 7) == 1);  // Fermat
        CHECK(pow_mod(7, 5, 13) == 11);
    }

    TEST_CASE("isqrt is exact") {
        CHECK(isqrt_u64(0) == 0);
        CHECK(isqrt_u64(1) == 1);
        CHECK(isqrt_u64(3) == 1);
        CHECK(isqrt_u64(4) == 2);
        CHECK(isqrt_u64(UINT64_MAX) == 4294967295ull);
        std::mt19937_64 rng(11);
        for (int i = 0; i < 2000; ++i) {
            const uint64_t r = rng() % 3037000499ull;
            CHECK(isqrt_u64(r * r) == r);
            if (r > 0) CHECK(isqrt_u64(r * r - 1) == r - 1);
            CHECK(isqrt_u64(r * r + 1) == r);
        }
    }

    TEST_CASE("is_prime matches trial division below 1e5") {
        for (uint64_t n = 0; n <= 100000; ++n)
            CHECK(is_prime(n) == oracle::is_prime(n));
    }

    TEST_CASE("is_prime on adversarial composites and large primes") {
        // Carmichael numbers and strong pseudoprimes to small bases
        for (uint64_t n : {561ull, 1105ull, 1729ull, 2465ull, 6601ull, 3215031751ull,
                           3825123056546413051ull})
            CHECK(!is_prime(n));
        for (uint64_t n : {2147483647ull,            // 2^31 - 1
                           2305843009213693951ull,   // 2^61 - 1
                           18446744073709551557ull,  // largest 64-bit prime
                           1000000007ull, 1000000000039ull})
            CHECK(is_prime(n));
    }

    TEST_CASE("factorize recomposes and yields primes") {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 200; ++i) {
            const uint64_t n = 1 + (rng() % 1000000000000ull);
            const auto f = factorize(n);
            uint64_t back = 1;
            for (const auto& [p, e] : f) {
                CHECK(is_prime(p));
                for (uint32_t k = 0; k < e; ++k) back *= p;
            }
            CHECK(back == n);
        }
        const auto f64 = factorize(64);
        REQUIRE(f64.size() == 1);
        CHECK(f64[0].first == 2);
        CHECK(f64[0].second == 6);
        CHECK(factorize(1).empty());
        // semiprime with two ~31-bit factors exercises the rho path
        const auto fs = factorize(2147483647ull * 2147483629ull);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].first == 2147483629ull);  // factors ascending
        CHECK(fs[1].first == 2147483647ull);
    }

    TEST_CASE("square_part strips exactly the 2-power square structure") {
        CHECK(square_part(2).g0 == 2);
        CHECK(square_part(2).u == 0);
        CHECK(square_part(4).g0 == 2);
        CHECK(square_part(4).u == 1);
        CHECK(square_part(16).g0 == 2);
        CHECK(square_part(16).u == 2);
        CHECK(square_part(9).g0 == 3);
        CHECK(square_part(9).u == 1);
        CHECK(square_part(81).g0 == 3);
        CHECK(square_part(81).u == 2);
        CHECK(square_part(36).g0 == 6);
        CHECK(square_part(36).u == 1);
        CHECK(square_part(10).g0 == 10);
        CHECK(square_part(10).u == 0);
        CHECK(square_part(8).g0 == 8);  // cube, not a square
        CHECK(square_part(8).u == 0);
        // g0 is never itself a perfect square
        for (uint64_t g = 2; g <= 3000; ++g) {
            const auto [g0, u] = square_part(g);
            uint64_t back = g0;
            for (uint32_t k = 0; k < u; ++k) back *= back;
            CHECK(back == g);
            const uint64_t r = isqrt_u64(g0);
            CHECK(r * r != g0);
        }
    }

    TEST_CASE("multiplicative_order matches the brute loop") {
        for (uint64_t p = 2; p <= 200; ++p) {
            if (!oracle::is_prime(p)) continue;
            for (uint64_t a = 1; a < p; ++a)
                CHECK(multiplicative_order(a, p) == oracle::order(a, p));
        }
        CHECK(multiplicative_order(10, 7) == 6);
        CHECK(multiplicative_order(10, 11) == 2);
        CHECK(multiplicative_order(2, 11) == 10);
        CHECK_THROWS_AS(multiplicative_order(3, 10), std::invalid_argument);
        CHECK_THROWS_AS(multiplicative_order(7, 7), std::invalid_argument);
    }

    TEST_CASE("is_primitive_root matches the brute loop") {
        for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 101ull, 197ull})
            for (uint64_t a = 1; a < p + 3; ++a)
                CHECK(is_primitive_root(a, p) == oracle::is_primitive_root(a, p));
        CHECK(is_primitive_root(2, 11));
        CHECK(!is_primitive_root(2, 7));
        CHECK(is_primitive_root(10, 7));
        CHECK(!is_primitive_root(10, 11));
        // p = 2: the only unit is 1, which generates the trivial group
        CHECK(is_primitive_root(1, 2));
        CHECK(is_primitive_root(3, 2));
        CHECK(!is_primitive_root(4, 2));
    }

    TEST_CASE("find_prime_triple frozen small cases") {
        const auto t41 = find_prime_triple(41, 2);
        REQUIRE(t41.has_value());
        CHECK(t41->p1 == 11);
        CHECK(t41->p2 == 11);
        CHECK(t41->p3 == 19);

        const auto t67 = find_prime_triple(67, 2);
        REQUIRE(t67.has_value());
        CHECK(t67->p1 == 11);
        CHECK(t67->p2 == 19);
        CHECK(t67->p3 == 37);

        CHECK(!find_prime_triple(65, 2).has_value());
        // even targets cannot be sums of three odd primes
        CHECK(!find_prime_triple(64, 2).has_value());
        CHECK(!find_prime_triple(1000, 2).has_value());
    }

    TEST_CASE("find_prime_triple matches the brute oracle") {
        for (uint64_t g0 : {2ull, 3ull, 10ull}) {
            for (uint64_t target = 3; target <= 400; ++target) {
                const auto got = find_prime_triple(target, g0);
                const auto want = oracle::prime_triple(target, g0);
                REQUIRE(got.has_value() == want.has_value());
                if (got) {
                    CHECK(got->p1 == (*want)[0]);
                    CHECK(got->p2 == (*want)[1]);
                    CHECK(got->p3 == (*want)[2]);
                }
            }
        }
    }

    TEST_CASE("triples satisfy their contract and verify_triple re-proves them") {
        std::mt19937_64 rng(13);
        int found = 0;
        for (int i = 0; i < 300; ++i) {
            const uint64_t target = 101 + 2 * (rng() % 3000);  // odd
            const auto t = find_prime_triple(target, 2);
            if (!t) continue;
            ++found;
            CHECK(t->target == target);
            CHECK(t->g0 == 2);
            CHECK(t->p1 + t->p2 + t->p3 == target);
            CHECK(t->p1 <= t->p2);
            CHECK(t->p2 <= t->p3);
            CHECK(t->p1 > isqrt_u64(target));
            for (uint64_t p : {t->p1, t->p2, t->p3}) {
                CHECK(is_prime(p));
                CHECK(is_primitive_root(2, p));
            }
            CHECK(verify_triple(*t));
            PrimeTriple bad = *t;
            bad.p3 += 2;
            CHECK(!verify_triple(bad));
            PrimeTriple wrong_root = *t;
            wrong_root.g0 = 7;
            // 7 is a primitive root of all three only rarely; either way the
            // sum/primality constraints must still be enforced
            wrong_root.p1 += 1;
            CHECK(!verify_triple(wrong_root));
        }
        CHECK(found > 200);  // odd targets of this size nearly always admit a triple
    }
}
