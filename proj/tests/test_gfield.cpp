#include "doctest.h"

#include <set>

#include "nsic/error.hpp"
#include "nsic/gfield.hpp"

using namespace nsic::gf;

namespace {

// Brute force: f of degree d over F_p is reducible iff some monic g of degree
// 1..d/2 divides it.
bool irreducible_by_trial_division(const std::vector<u64>& f, u64 p) {
    const auto Fp = build_field(p, 1);
    const Poly F(f);
    const int d = F.degree();
    for (int dg = 1; dg <= d / 2; ++dg) {
        u64 count = 1;
        for (int i = 0; i < dg; ++i) count *= p;
        for (u64 v = 0; v < count; ++v) {
            std::vector<Elem> g;
            u64 w = v;
            for (int i = 0; i < dg; ++i) {
                g.push_back(w % p);
                w /= p;
            }
            g.push_back(1);
            if (poly_mod(*Fp, F, Poly(g)).is_zero()) return false;
        }
    }
    return true;
}

u64 order_by_scan(const ExtField& F, Elem a) {
    u64 t = 1;
    for (Elem x = a; x != 1; x = F.mul(x, a)) ++t;
    return t;
}

}  // namespace

TEST_CASE("canonical moduli") {
    CHECK(build_field(2, 1)->modulus() == std::vector<u64>{1, 1});
    CHECK(build_field(2, 4)->modulus() == std::vector<u64>{1, 1, 0, 0, 1});
    CHECK(build_field(2, 4)->to_string() == "2^4:1,1,0,0,1");
    const auto F = build_field(3, 5);
    CHECK(F->size() == 243);
    CHECK(irreducible_by_trial_division(F->modulus(), 3));
    // Every lower-ranked candidate with nonzero constant term is reducible.
    for (u64 p : {2, 3, 5}) {
        for (unsigned k = 2; k <= 4; ++k) {
            const auto mod = canonical_modulus(p, k);
            CHECK(irreducible_by_trial_division(mod, p));
            u64 rank = 0;
            for (std::size_t i = k; i-- > 0;) rank = rank * p + mod[i];
            for (u64 v = 1; v < rank; ++v) {
                if (v % p == 0) continue;
                std::vector<u64> c;
                for (u64 w = v, i = 0; i < k; ++i, w /= p) c.push_back(w % p);
                c.push_back(1);
                CHECK_FALSE(irreducible_by_trial_division(c, p));
            }
        }
    }
    CHECK_THROWS_AS(build_field(2, 0), nsic::InvalidInput);
    CHECK_THROWS_AS(build_field(2, 25), nsic::BudgetExceeded);
}

TEST_CASE("element orders") {
    const auto F = build_field(2, 4);
    CHECK(element_order(*F, 1) == 1);
    CHECK(element_order(*F, F->generator()) == 15);
    CHECK(order_by_scan(*F, F->generator()) == 15);
    const Elem w3 = F->pow(F->generator(), 3);
    CHECK(element_order(*F, w3) == order_by_scan(*F, w3));
    CHECK(element_order(*F, w3) == 5);
    CHECK_THROWS_AS(element_order(*F, 0), nsic::InvalidInput);
}

TEST_CASE("find_element_of_order") {
    const auto F = build_field(2, 4);
    // Least-ranked primitive element, by scan.
    Elem least = 0;
    for (Elem r = 1; r < 16; ++r) {
        if (order_by_scan(*F, r) == 15) {
            least = r;
            break;
        }
    }
    CHECK(find_element_of_order(*F, 15) == least);
    CHECK(find_element_of_order(*F, 1) == 1);
    CHECK(find_element_of_order(*F, 5) == F->pow(least, 3));
    CHECK_THROWS_AS(find_element_of_order(*F, 7), nsic::InvalidInput);
}

TEST_CASE("rel_trace") {
    const auto F4 = build_field(2, 2);
    // x^2 + x + 1: omega = x has rank 2.
    CHECK(rel_trace(*F4, 2, 1) == 1);
    CHECK(rel_trace(*F4, 0, 1) == 0);
    const auto F = build_field(3, 4);
    const SubfieldEmbedding emb(F, 2);
    for (Elem a = 0; a < 9; ++a) {
        const Elem b = emb.to_big(a);
        CHECK(rel_trace(*F, b, 2) == F->add(b, b));
    }
    CHECK_THROWS_AS(rel_trace(*F, 1, 3), nsic::InvalidInput);
}

TEST_CASE("min_poly") {
    const auto F = build_field(2, 4);
    CHECK(min_poly(*F, 1, 1) == Poly({1, 1}));
    const Elem xi = find_element_of_order(*F, 5);
    CHECK(min_poly(*F, xi, 1) == Poly({1, 1, 1, 1, 1}));
    const Poly over4 = min_poly(*F, xi, 2);
    CHECK(over4.degree() == 2);
    const Elem w = F->generator();
    // (x - xi)(x - xi^4) = x^2 + (xi + xi^4) x + 1
    CHECK(over4 == Poly({1, F->add(xi, F->pow(xi, 4)), 1}));
    CHECK(over4 == Poly({1, F->pow(w, 10), 1}));
}

TEST_CASE("subgroup_U") {
    const auto F = build_field(2, 4);
    const SubgroupU one(F, 1);
    CHECK(one.elems() == std::vector<Elem>{1});
    const SubgroupU u5(F, 5);
    std::set<Elem> distinct(u5.elems().begin(), u5.elems().end());
    CHECK(distinct.size() == 5);
    for (u64 i = 0; i < 5; ++i) CHECK(u5.index_of(u5[i]) == i);
    const SubgroupU all(F, 15);
    for (Elem a = 1; a < 16; ++a) CHECK(all.contains(a));
    CHECK_FALSE(all.contains(0));
    CHECK_THROWS_AS(SubgroupU(F, 7), nsic::InvalidInput);
}

TEST_CASE("polynomial fallback agrees with log tables") {
    const ExtField big_tables(2, 10, canonical_modulus(2, 10));
    CHECK(big_tables.has_log_table());
    const auto F21 = build_field(2, 21);
    CHECK_FALSE(F21->has_log_table());
    const Elem g = F21->generator();
    CHECK(element_order(*F21, g) == (u64{1} << 21) - 1);
    const Elem a = F21->pow(g, 12345), b = F21->pow(g, 999);
    CHECK(F21->mul(a, b) == F21->pow(g, 12345 + 999));
    CHECK(F21->mul(a, F21->inv(a)) == 1);
}

TEST_CASE("serialization") {
    CHECK(Poly({1, 0, 0, 1, 1}).to_string() == "1,0,0,1,1");
    CHECK(Poly::parse("1,0,0,1,1") == Poly({1, 0, 0, 1, 1}));
    CHECK(Poly().to_string() == "0");
    CHECK_THROWS_AS(Poly::parse("1,x"), nsic::InvalidInput);
}
