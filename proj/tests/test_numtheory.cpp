#include "doctest.h"

#include <set>

#include "nsic/error.hpp"
#include "nsic/numtheory.hpp"

using namespace nsic::nt;

namespace {

std::vector<PrimePower> trial_division(u64 n) {
    std::vector<PrimePower> out;
    for (u64 p = 2; p * p <= n; ++p) {
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) out.push_back({p, k});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

u64 order_by_scan(u64 n, u64 q) {
    if (n == 1) return 1;
    u64 x = q % n, k = 1;
    while (x != 1) {
        x = x * (q % n) % n;
        ++k;
    }
    return k;
}

unsigned valuation_by_division(u64 p, u64 n) {
    unsigned k = 0;
    for (; n % p == 0; n /= p) ++k;
    return k;
}

}  // namespace

TEST_CASE("factor") {
    CHECK(factor(1).factors.empty());
    CHECK(factor(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
    CHECK(factor(3072).factors == trial_division(3072));
    for (u64 n = 1; n < 3000; ++n) CHECK(factor(n).factors == trial_division(n));
    const u64 big = 4611686014132420609ULL;  // (2^31 - 1)^2
    CHECK(factor(big).factors == std::vector<PrimePower>{{2147483647, 2}});
    const u64 semi = 1000000007ULL * 998244353ULL;
    CHECK(factor(semi).factors == std::vector<PrimePower>{{998244353, 1}, {1000000007, 1}});
    CHECK_THROWS_AS(factor(0), nsic::InvalidInput);
    CHECK_THROWS_AS(factor((u64{1} << 63) + 1), nsic::InvalidInput);
}

TEST_CASE("divisors and totients") {
    CHECK(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(1) == std::vector<u64>{1});
    CHECK(euler_phi(36) == 12);
    CHECK(carmichael(8) == 2);
    CHECK(carmichael(15) == 4);
}

TEST_CASE("mult_ord") {
    CHECK(mult_ord(11, FieldDesc(3, 1)) == order_by_scan(11, 3));
    CHECK(mult_ord(11, FieldDesc(3, 1)) == 5);
    CHECK(mult_ord(23, FieldDesc(2, 1)) == 11);
    CHECK(mult_ord(1, FieldDesc(7, 3)) == 1);
    CHECK(mult_ord(16, FieldDesc(3, 2)) == 2);
    CHECK_THROWS_AS(mult_ord(6, FieldDesc(2, 1)), nsic::InvalidInput);
    // q = 2^1000 is never materialized.
    CHECK(mult_ord(7, FieldDesc(2, 1000)) == order_by_scan(7, powmod(2, 1000, 7)));
}

TEST_CASE("mult_ord minimality, scan for n <= 10^4") {
    for (u64 p : {2, 3, 5, 7}) {
        for (u64 n = 1; n <= 10000; ++n) {
            if (n % p == 0) continue;
            const u64 m = mult_ord(n, FieldDesc(p, 1));
            REQUIRE(m == mult_ord_naive(n, p));
            REQUIRE(powmod(p, m, n) == 1 % n);
        }
    }
}

TEST_CASE("nu") {
    CHECK(nu(2, 12) == 2);
    CHECK(nu(3, 1) == 0);
    CHECK(nu(2, u64{1} << 20) == valuation_by_division(2, u64{1} << 20));
}

TEST_CASE("lte_check") {
    auto a = lte_check(3, 4, LteMode::CoprimeExponent, 2);
    CHECK(a.hypothesis_met);
    CHECK(a.valuation == valuation_by_division(3, 15));
    auto b = lte_check(3, 4, LteMode::PrimePower);
    CHECK(b.valuation == valuation_by_division(3, 63));
    CHECK(b.holds);
    auto c = lte_check(2, 3, LteMode::PrimePower);
    CHECK(c.valuation == 3);
    CHECK(c.lower_bound_only);
    CHECK(c.holds);
    auto d = lte_check(3, 5, LteMode::PrimePower);
    CHECK_FALSE(d.hypothesis_met);
}

TEST_CASE("star_prime_set") {
    CHECK(star_prime_set(8, FieldDesc(3, 2)) == std::vector<u64>{2});
    CHECK(star_prime_set(1, FieldDesc(5, 1)).empty());
    CHECK(star_prime_set(3, FieldDesc(2, 2)) == std::vector<u64>{3});
}

TEST_CASE("equally_spaced_ok") {
    CHECK(equally_spaced_ok(16, 8, FieldDesc(3, 2)));
    CHECK(equally_spaced_ok(9, 3, FieldDesc(2, 2)));
    CHECK(equally_spaced_ok(4, 2, FieldDesc(3, 1)));
    CHECK_THROWS_AS(equally_spaced_ok(10, 3, FieldDesc(3, 1)), nsic::InvalidInput);
}
