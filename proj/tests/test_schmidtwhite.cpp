#include "doctest.h"

#include <set>

#include "nsic/error.hpp"
#include "nsic/schmidtwhite.hpp"

using namespace nsic;
using namespace nsic::sw;

namespace {

std::vector<u64> weights_by_materialization(const CqmuCode& c) {
    return code::weight_distribution_bruteforce(c.trace_code()).nonzero_weights();
}

// -1 in <p> mod d, by listing the whole cyclic subgroup.
bool minus_one_in_powers(u64 p, u64 d) {
    if (d <= 2) return true;
    std::set<u64> powers;
    for (u64 x = 1 % d; powers.insert(x).second;) x = x * p % d;
    return powers.count(d - 1) > 0;
}

}  // namespace

TEST_CASE("u_delta") {
    CHECK(u_delta({2, 1}, 4, 3) == 3);
    CHECK(u_delta({2, 1}, 4, 1) == 1);
    CHECK(u_delta({3, 1}, 5, 22) == 11);
    CHECK_THROWS_AS(u_delta({2, 1}, 4, 4), InvalidInput);
}

TEST_CASE("code construction") {
    const auto c = make_code({2, 1}, 4, 3);
    CHECK(c.n == 5);
    CHECK(c.delta() == 15);
    CHECK(c.to_string() == "C(2^1,4,3)");
    CHECK(code_of_pair(11, {3, 1}).u == 22);
    CHECK_THROWS_AS(make_code({2, 1}, 4, 5), InvalidInput);  // n = 3 has order 2
}

TEST_CASE("weight predicates") {
    CHECK(is_one_weight(make_code({2, 1}, 4, 1), true));
    CHECK(weights(make_code({2, 1}, 4, 1)) == std::vector<u64>{8});
    CHECK_FALSE(is_one_weight(make_code({2, 1}, 4, 3), true));
    CHECK_FALSE(is_one_weight(make_code({3, 1}, 5, 22), true));

    const auto t5 = is_two_weight(make_code({2, 1}, 4, 3));
    CHECK(t5.two_weight);
    CHECK(t5.weights == std::vector<u64>{2, 4});
    const auto t11 = is_two_weight(make_code({3, 1}, 5, 22));
    CHECK(t11.two_weight);
    CHECK(t11.weights == std::vector<u64>{6, 9});
    CHECK_FALSE(is_two_weight(make_code({2, 1}, 4, 1)).two_weight);
}

TEST_CASE("weights agree with materialized codewords") {
    for (const auto& q : prime_powers_up_to(9)) {
        for (u64 m = 1; m <= 6; ++m) {
            const auto Q = nt::checked_pow(*q.value(), m);
            if (*Q > 4096) break;
            for (u64 u : nt::divisors(*Q - 1)) {
                const u64 n = (*Q - 1) / u;
                if (nt::mult_ord(n, q) != m) continue;
                const auto c = make_code(q, m, u);
                CAPTURE(c.to_string());
                CHECK(weights(c) == weights_by_materialization(c));
            }
        }
    }
}

TEST_CASE("semiprimitive") {
    const auto s1 = semiprimitive({2, 1}, 4, 3);
    CHECK(s1.semiprimitive);
    CHECK(s1.u_delta == 3);
    CHECK(s1.j == 1u);
    CHECK_FALSE(is_semiprimitive({3, 1}, 5, 22));
    CHECK(is_semiprimitive({2, 1}, 4, 1));
    CHECK(semiprimitive({2, 1}, 4, 1).j == 0u);
    for (u64 p : {2, 3, 5, 7}) {
        for (u64 m = 2; m <= 6; ++m) {
            const u64 Q = *nt::checked_pow(p, m);
            for (u64 u : nt::divisors(Q - 1)) {
                const auto s = semiprimitive({p, 1}, m, u);
                CHECK(s.semiprimitive == minus_one_in_powers(p, s.u_delta));
                if (s.semiprimitive && s.u_delta > 2) CHECK(nt::powmod(p, *s.j, s.u_delta) == s.u_delta - 1);
            }
        }
    }
}

TEST_CASE("subfield codes") {
    CHECK(is_subfield_code(make_code({2, 1}, 4, 1)));
    CHECK_FALSE(is_subfield_code(make_code({3, 1}, 4, 8)));
    CHECK_FALSE(is_subfield_code(make_code({2, 1}, 4, 3)));
    // |U| = 5 and |F_4^*| = 3 are coprime, so U F_4^* is all of F_16^*.
    CHECK(is_subfield_code(make_code({2, 2}, 2, 3)));
}

TEST_CASE("sw_audit on small fields") {
    const auto a = sw_audit(1 << 12, {{2, 1}, {3, 1}});
    CHECK(a.violations.empty());
    CHECK(a.skipped == 0);
    auto find = [&](u64 n, nt::FieldDesc q) -> const AuditRow* {
        for (const auto& r : a.rows) {
            if (r.n == n && r.q == q) return &r;
        }
        return nullptr;
    };
    const auto* r5 = find(5, {2, 1});
    REQUIRE(r5);
    CHECK(r5->status == "pass");
    CHECK(r5->semiprimitive);
    CHECK(r5->csv_row() == "5,2,1,4,3,NonStandard,2;4,true,false,false,pass");
    const auto* r11 = find(11, {3, 1});
    REQUIRE(r11);
    CHECK(r11->status == "pass");
    CHECK(r11->exception);
    CHECK_FALSE(r11->semiprimitive);
    const auto* r15 = find(15, {2, 1});
    REQUIRE(r15);
    CHECK(r15->status == "exempt");
    CHECK(find(13, {3, 1}) == nullptr);  // standard
    CHECK(a.to_csv().rfind(std::string(kAuditHeader) + "\n", 0) == 0);
}

TEST_CASE("lemma instances") {
    const auto lift = verify_lift({3, 1}, 8, 3);
    CHECK(lift.lhs);
    CHECK(lift.rhs);
    CHECK(lift.side_ok);
    const auto spaced = verify_spaced({3, 1}, 16, 8);
    CHECK(spaced.lhs == spaced.rhs);
    CHECK_THROWS_AS(verify_spaced({3, 1}, 8, 4), InvalidInput);  // ord_8(3) = ord_4(3)
    CHECK_THROWS_AS(verify_lift({3, 1}, 2, 3), InvalidInput);    // m = 1
    const auto prod = verify_product({2, 1}, 3, 7);
    CHECK(prod.lhs == prod.rhs);
}

TEST_CASE("prime_powers_up_to") {
    const auto v = prime_powers_up_to(10);
    std::vector<std::string> s;
    for (const auto& q : v) s.push_back(q.to_string());
    CHECK(s == std::vector<std::string>{"2^1", "3^1", "2^2", "5^1", "7^1", "2^3", "3^2"});
}
