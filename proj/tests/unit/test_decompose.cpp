#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nivsum/decompose.hpp"
#include "oracles.hpp"

using namespace nivsum;

namespace {

// random digit string with nonzero top digit
DigitString random_digits(std::mt19937_64& rng, uint32_t g, std::size_t len) {
    std::vector<uint32_t> d(len);
    for (auto& x : d) x = rng() % g;
    d.back() = 1 + rng() % (g - 1);
    return DigitString(g, d);
}

// machine value of a summand list (all summands must fit)
uint64_t total_value(const std::vector<DigitString>& parts) {
    uint64_t s = 0;
    for (const auto& p : parts) s += p.value();
    return s;
}

// binary input with digit sum exactly s and length len, deterministic layout:
// ones in the low positions, then spread remainder pseudo-randomly
DigitString binary_with_sum(std::mt19937_64& rng, uint64_t s, std::size_t len) {
    std::vector<uint32_t> d(len, 0);
    d[len - 1] = 1;
    uint64_t placed = 1;
    while (placed < s) {
        const std::size_t j = rng() % (len - 1);
        if (d[j] == 0) {
            d[j] = 1;
            ++placed;
        }
    }
    return DigitString(2, d);
}

}  // namespace

TEST_SUITE("decompose") {

    TEST_CASE("split reconstructs the input and honors the digit-sum drift bound") {
        std::mt19937_64 rng(31);
        for (uint32_t g : {2u, 3u, 10u, 16u}) {
            for (int iter = 0; iter < 1000; ++iter) {
                const std::size_t len = 20 + rng() % 380;
                const DigitString n = random_digits(rng, g, len);
                const uint64_t s = n.digit_sum();
                const std::size_t v = 2 + rng() % 4;  // 2..5 parts
                const uint64_t drift = uint64_t(g - 2) * (v - 1);
                if (s < (drift + 2) * v) continue;  // leave headroom for every target
                std::vector<uint64_t> targets(v);
                uint64_t rest = s;
                for (std::size_t i = 0; i + 1 < v; ++i) {
                    targets[i] = 1 + rng() % std::max<uint64_t>(1, rest / v);
                    rest -= targets[i];
                }
                targets[v - 1] = rest;
                if (targets[v - 1] <= drift) continue;

                const auto parts = split(n, targets);
                REQUIRE(parts.size() == v);
                DigitString joined = parts[0];
                for (std::size_t i = 1; i < v; ++i) joined = concat(joined, parts[i]);
                CHECK(joined == n);
                for (std::size_t i = 0; i < v; ++i) {
                    const uint64_t ps = parts[i].digit_sum();
                    const uint64_t diff = ps > targets[i] ? ps - targets[i] : targets[i] - ps;
                    CHECK(diff <= drift);
                    CHECK(parts[i].digits().back() != 0);
                }
            }
        }
    }

    TEST_CASE("split single-part and exact-cut behavior") {
        const DigitString n = to_digits(912, 10);  // digit sum 12
        const auto whole = split(n, {12});
        REQUIRE(whole.size() == 1);
        CHECK(whole[0] == n);

        // digits 2,1,9: first part takes digits until its sum reaches 3
        const auto two = split(n, {3, 9});
        REQUIRE(two.size() == 2);
        CHECK(two[0].value() == 12);  // digits 2,1
        CHECK(two[1].value() == 9);
        CHECK(concat(two[0], two[1]) == n);
    }

    TEST_CASE("split rejects hypothesis violations with the named stage") {
        const DigitString n = to_digits(912, 10);
        const auto stage_of = [](auto fn) {
            try {
                fn();
            } catch (const DecomposeError& e) {
                return e.stage;
            }
            return Stage::internal;
        };
        CHECK(stage_of([&] { split(n, {}); }) == Stage::split_hypothesis);
        CHECK(stage_of([&] { split(n, {3, 0, 9}); }) == Stage::split_hypothesis);
        CHECK(stage_of([&] { split(n, {3, 3}); }) == Stage::split_hypothesis);   // sum != 12
        CHECK(stage_of([&] { split(n, {4, 4, 4}); }) == Stage::split_hypothesis);  // last <= drift? no: drift=16
        // base 10, v=3: drift bound (g-2)(v-1) = 16 >= last target 4
    }

    TEST_CASE("lift merges part certificates into one for the concatenation") {
        // parts chosen Niven so each certifies directly
        const DigitString a = to_digits(45, 10);
        const DigitString b = to_digits(50, 10);
        const DigitString c = to_digits(5, 10);
        const auto cert = lift({direct_certificate(a), direct_certificate(b),
                                direct_certificate(c)});
        // concatenated digits 4,5 | 0,5 | 5 read as 55045... little-endian:
        // a=[5,4], b=[0,5], c=[5] -> digits 5,4,0,5,5 = 55045
        CHECK(cert.input.value() == 55045);
        CHECK(cert.method == Method::direct);
        CHECK(total_value(cert.summands) == 55045);
        for (const auto& s : cert.summands) CHECK(is_niven(s));
        CHECK(verify_certificate(cert).ok);

        const auto single = lift({direct_certificate(a)});
        CHECK(single.input == a);
        CHECK(single.summands.size() == 1);
    }

    TEST_CASE("lift validates its inputs") {
        CHECK_THROWS_AS(lift({}), std::invalid_argument);
        const DigitString a = to_digits(45, 10);
        DecompositionCert broken = direct_certificate(a);
        broken.summands[0] = to_digits(44, 10);  // no longer sums to the input
        CHECK_THROWS_AS(lift({broken}), std::invalid_argument);
        CHECK_THROWS_AS(lift({direct_certificate(a), direct_certificate(to_digits(3, 2))}),
                        std::invalid_argument);
    }

    TEST_CASE("direct_certificate only accepts Niven input") {
        const auto cert = direct_certificate(to_digits(912, 10));
        CHECK(cert.summands.size() == 1);
        CHECK(cert.method == Method::direct);
        CHECK(verify_certificate(cert).ok);
        CHECK_THROWS_AS(direct_certificate(to_digits(913, 10)), std::invalid_argument);
    }

    TEST_CASE("decompose_part guaranteed mode succeeds on hypothesis-satisfying input") {
        std::mt19937_64 rng(32);
        int done = 0;
        for (uint64_t p = 1123; done < 10; p += 2) {
            if (!is_prime(p) || !is_primitive_root(2, p)) continue;
            ++done;
            const uint64_t h = 8 + rng() % 9;  // [8, 16]
            const uint64_t s = p + h;
            const DigitString n = binary_with_sum(rng, s, 2 * s);
            const auto cert = decompose_part(n, p, /*guaranteed=*/true);
            REQUIRE(cert.has_value());
            CHECK(cert->summands.size() == h + 1);
            CHECK(cert->summands.size() <= 8u * 2 + 1);
            CHECK(cert->method == Method::lemma_root);
            const auto res = verify_certificate(*cert);
            CHECK(res.ok);
            // main summand: digit sum exactly p, divisible by p
            CHECK(cert->summands[0].digit_sum() == p);
            CHECK(mod_eval(cert->summands[0], p) == 0);
            for (std::size_t i = 1; i < cert->summands.size(); ++i)
                CHECK(power_exponent(cert->summands[i]).has_value());
        }
    }

    TEST_CASE("decompose_part guaranteed mode rejects each broken hypothesis") {
        std::mt19937_64 rng(33);
        const auto stage_of = [](auto fn) {
            try {
                fn();
            } catch (const DecomposeError& e) {
                return e.stage;
            }
            return Stage::internal;
        };
        // not prime
        const DigitString n1 = binary_with_sum(rng, 1200, 2400);
        CHECK(stage_of([&] { decompose_part(n1, 1189, true); }) == Stage::part_hypothesis);
        // h out of [4g, 8g] = [8, 16]: choose p so that h = 2
        uint64_t p_close = 0;
        for (uint64_t p = 1198; p > 2; --p)
            if (oracle::is_prime(p) && oracle::is_primitive_root(2, p)) {
                p_close = p;
                break;
            }
        const DigitString n2 = binary_with_sum(rng, p_close + 2, 2 * (p_close + 2));
        CHECK(stage_of([&] { decompose_part(n2, p_close, true); }) == Stage::part_hypothesis);
        // digit sum too small for (iii): s <= 140 g^3 = 1120
        uint64_t p_small = 0;
        for (uint64_t p = 1000; p > 2; --p)
            if (oracle::is_prime(p) && oracle::is_primitive_root(2, p)) {
                p_small = p;
                break;
            }
        const DigitString n3 = binary_with_sum(rng, p_small + 10, 3 * (p_small + 10));
        CHECK(stage_of([&] { decompose_part(n3, p_small, true); }) == Stage::part_hypothesis);
        // (iii) density: digit sum not above (g-1) len / 3
        const DigitString n4 = binary_with_sum(rng, 1131, 4000);
        CHECK(stage_of([&] { decompose_part(n4, 1123, true); }) == Stage::part_hypothesis);
    }

    TEST_CASE("decompose_part best-effort reports absence instead of throwing") {
        // tiny instance: digit sum 3, p = 3, h = 0, value 7 not divisible by 3
        const DigitString n = to_digits(7, 2);  // binary 111
        const auto miss = decompose_part(n, 3, false);
        CHECK(!miss.has_value());
        // value 21 = 10101_2, digit sum 3, 21 % 3 == 0: h = 0 works
        const auto hit = decompose_part(to_digits(21, 2), 3, false);
        REQUIRE(hit.has_value());
        CHECK(hit->summands.size() == 1);
        CHECK(verify_certificate(*hit).ok);
    }

    TEST_CASE("sample_s_class is deterministic and lands in the class") {
        for (uint32_t g : {2u, 3u, 10u}) {
            const SClassParams params{420, (7 + 18 * g) % 420, g};
            const DigitString a = sample_s_class(params, 2000, 99);
            const DigitString b = sample_s_class(params, 2000, 99);
            CHECK(a == b);
            const DigitString c = sample_s_class(params, 2000, 100);
            CHECK(!(a == c));
            CHECK(a.length() == 2000);
            CHECK(a.digits().back() != 0);
            CHECK(a.digit_sum() % 420 == (7 + 18 * g) % 420);
            CHECK(is_in_s_class(a, params));
            CHECK(s2_scan(a));
        }
        CHECK_THROWS_AS(sample_s_class({420, 0, 10}, 420, 1), std::invalid_argument);
    }

    TEST_CASE("is_in_s_class checks residue and scan") {
        const SClassParams p3{3, 0, 10};
        // 9 has the right residue and a passing window (27 > 9); 3 has the
        // right residue but fails the scan (9 is not strictly above 9); 13
        // passes the scan but has digit sum 4
        CHECK(is_in_s_class(to_digits(9, 10), p3));
        CHECK(!is_in_s_class(to_digits(3, 10), p3));
        CHECK(!is_in_s_class(to_digits(13, 10), p3));
        CHECK_THROWS_AS(is_in_s_class(to_digits(3, 2), p3), std::invalid_argument);
    }

    TEST_CASE("decompose end-to-end at small scale") {
        const SClassParams params{420, (1 + 36) % 420, 2};
        for (uint64_t seed : {0ull, 1ull, 2ull}) {
            const DigitString n = sample_s_class(params, 2000, seed);
            const auto cert = decompose(n);
            CHECK(cert.method == Method::pipeline);
            CHECK(cert.summands.size() <= 24 * 2 + 3);
            CHECK(cert.input == n);
            const auto res = verify_certificate(cert);
            CHECK(res.ok);
            REQUIRE(cert.provenance.has_value());
            REQUIRE(cert.provenance->triple.has_value());
            const auto& t = *cert.provenance->triple;
            const uint64_t reduced = n.digit_sum() - 36;
            CHECK(t[0] + t[1] + t[2] == reduced);
            for (uint64_t p : t) {
                CHECK(is_prime(p));
                CHECK(p > isqrt_u64(reduced));
                CHECK(is_primitive_root(2, p));
            }
            CHECK(cert.provenance->split_lengths.size() == 3);
            CHECK(cert.provenance->witnesses.size() == 3);
            CHECK(cert.provenance->h_values.size() == 3);
            for (uint64_t h : cert.provenance->h_values) {
                CHECK(h >= 4 * 2);
                CHECK(h <= 8 * 2);
            }
        }
    }

    TEST_CASE("decompose reports the failing stage") {
        const auto stage_of = [](const DigitString& n) {
            try {
                decompose(n);
            } catch (const DecomposeError& e) {
                return e.stage;
            }
            return Stage::internal;
        };
        // digit sum below 18g + 3
        CHECK(stage_of(to_digits(7, 2)) == Stage::precondition);

        // long string failing the substring scan: a large all-zero window
        // ending in an isolated one
        std::mt19937_64 rng(34);
        DigitString base = sample_s_class({420, 37, 2}, 2000, 5);
        std::vector<uint32_t> d = base.digits();
        for (std::size_t j = 0; j <= 400; ++j) d[j] = 0;
        d[400] = 1;
        CHECK(stage_of(DigitString(2, d)) == Stage::s2_check);

        // even digit sum: reduced target is even, no odd prime triple
        std::vector<uint32_t> e = base.digits();
        if (e[0] == 0)
            e[0] = 1;
        else
            e[0] = 0;  // flip parity of the digit sum
        const DigitString flipped(2, e);
        if (flipped.digit_sum() % 2 == 0 && s2_scan(flipped))
            CHECK(stage_of(flipped) == Stage::prime_triple);
    }

    TEST_CASE("verify_certificate accepts the valid and names reasons for the broken") {
        const SClassParams params{420, 37, 2};
        const DigitString n = sample_s_class(params, 2000, 3);
        const DecompositionCert good = decompose(n);
        REQUIRE(verify_certificate(good).ok);

        SUBCASE("a corrupted summand digit breaks the sum") {
            DecompositionCert bad = good;
            auto d = bad.summands[0].digits();
            d[0] ^= 1;
            bad.summands[0] = DigitString(2, d);
            const auto res = verify_certificate(bad);
            CHECK(!res.ok);
            CHECK(!res.reasons.empty());
        }
        SUBCASE("a dropped summand breaks the sum") {
            DecompositionCert bad = good;
            bad.summands.pop_back();
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("an extra summand breaks the sum") {
            DecompositionCert bad = good;
            bad.summands.push_back(to_digits(1, 2));
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("a tampered triple is caught") {
            DecompositionCert bad = good;
            (*bad.provenance->triple)[2] += 2;
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("a tampered witness position is caught") {
            DecompositionCert bad = good;
            bad.provenance->witnesses[0][0] += 1;
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("tampered split lengths are caught") {
            DecompositionCert bad = good;
            bad.provenance->split_lengths[0] += 1;
            bad.provenance->split_lengths[1] -= 1;
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("an out-of-range h is caught") {
            DecompositionCert bad = good;
            bad.provenance->h_values[0] = 17;  // above 8g
            CHECK(!verify_certificate(bad).ok);
        }
        SUBCASE("relabeling the method to lemma_root is caught") {
            DecompositionCert bad = good;
            bad.method = Method::lemma_root;
            CHECK(!verify_certificate(bad).ok);
        }
    }

    TEST_CASE("verify_certificate rejects structurally silly claims") {
        // direct certificate whose summands sum correctly but are not Niven:
        // 913 = 911 + 2; 911 has digit sum 11, not a divisor
        DecompositionCert fake{to_digits(913, 10),
                               {to_digits(911, 10), to_digits(2, 10)},
                               Method::direct,
                               std::nullopt};
        CHECK(!verify_certificate(fake).ok);

        // sums that do not add up
        DecompositionCert off{to_digits(912, 10),
                              {to_digits(900, 10), to_digits(10, 10)},
                              Method::direct,
                              std::nullopt};
        CHECK(!verify_certificate(off).ok);

        // valid two-summand direct claim: 912 = 910 + 2? 910 digit sum 10,
        // 910 % 10 == 0, and 2 is Niven; sums match
        DecompositionCert ok{to_digits(912, 10),
                             {to_digits(910, 10), to_digits(2, 10)},
                             Method::direct,
                             std::nullopt};
        CHECK(verify_certificate(ok).ok);
    }

    TEST_CASE("calibrate_residues finds odd residues for small bases") {
        const auto scan = calibrate_residues(2, 1000);
        CHECK(scan.g0 == 2);
        CHECK(scan.q == kCalibrationModulus);
        REQUIRE(scan.default_r_prime.has_value());
        CHECK(*scan.default_r_prime == 1);
        CHECK(!scan.admissible.empty());
        for (uint32_t r : scan.admissible) CHECK(r % 2 == 1);

        const auto scan3 = calibrate_residues(3, 1000);
        REQUIRE(scan3.default_r_prime.has_value());
        CHECK(*scan3.default_r_prime == 3);
    }
}
