#include "doctest.h"

#include <set>

#include "nsic/cycliccode.hpp"
#include "nsic/error.hpp"

using namespace nsic;
using namespace nsic::code;

namespace {

u64 weight(const std::vector<Elem>& w) {
    u64 s = 0;
    for (Elem c : w) s += c != 0;
    return s;
}

std::map<u64, u64> counts_of(const WeightDistribution& wd) { return wd.counts; }

// Enumerates every word of F_q^n and keeps those in the code.
std::map<u64, u64> distribution_by_word_scan(const CyclicCodeSpec& spec) {
    const u64 q = spec.coefficient_field()->size();
    u64 total = 1;
    for (u64 i = 0; i < spec.n; ++i) total *= q;
    std::map<u64, u64> out;
    std::vector<Elem> w(spec.n);
    for (u64 v = 0; v < total; ++v) {
        u64 x = v;
        for (u64 i = 0; i < spec.n; ++i, x /= q) w[i] = x % q;
        if (spec.contains(w)) ++out[weight(w)];
    }
    return out;
}

}  // namespace

TEST_CASE("poly_order") {
    const auto F2 = gf::build_field(2, 1);
    const auto F3 = gf::build_field(3, 1);
    CHECK(poly_order(*F3, Poly({2, 1})) == 1);  // x - 1
    CHECK(poly_order(*F2, Poly({1, 1, 1})) == 3);
    CHECK(poly_order(*F2, Poly({1, 1, 1, 1, 1})) == 5);
    CHECK(poly_order(*F2, Poly({1, 1, 0, 0, 1})) == 15);
    CHECK(poly_order(*F3, Poly({1, 1})) == 2);  // x + 1
    CHECK_THROWS_AS(poly_order(*F2, Poly({0, 1})), InvalidInput);
}

TEST_CASE("is_degenerate") {
    const auto d1 = is_degenerate(CyclicCodeSpec{4, {3, 1}, Poly({1, 1})});
    CHECK(d1.degenerate);
    CHECK(d1.nprime == 2);
    CHECK(d1.k == 2);
    const auto d2 = is_degenerate(CyclicCodeSpec{2, {3, 1}, Poly({2, 1})});
    CHECK(d2.degenerate);
    CHECK(d2.nprime == 1);
    CHECK(d2.k == 2);
    const auto tc = irreducible_code_of_pair(5, {2, 1});
    CHECK_FALSE(is_degenerate(tc.spec).degenerate);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(CyclicCodeSpec({6, {2, 1}, Poly({1, 1})}).validate(), InvalidInput);
    CHECK_THROWS_AS(CyclicCodeSpec({5, {2, 1}, Poly({1, 1, 1})}).validate(), InvalidInput);
    CHECK_NOTHROW(CyclicCodeSpec({7, {2, 1}, Poly({1, 1, 0, 1})}).validate());
    const CyclicCodeSpec s{7, {2, 1}, Poly({1, 1, 0, 1})};
    CHECK(s.to_json().dump() == R"({"dim":3,"e":1,"h":[1,1,0,1],"n":7,"p":2})");
}

TEST_CASE("irreducible_code_of_pair") {
    SUBCASE("(5, F_2) is the even-weight code") {
        const auto tc = irreducible_code_of_pair(5, {2, 1});
        CHECK(tc.spec.dim() == 4);
        CHECK(tc.codeword_count() == 16);
        std::set<std::vector<Elem>> words;
        for_each_codeword(tc, [&](Elem, const std::vector<Elem>& w) {
            CHECK(weight(w) % 2 == 0);
            words.insert(w);
        });
        CHECK(words.size() == 16);
    }
    SUBCASE("(1, F_2)") {
        const auto tc = irreducible_code_of_pair(1, {2, 1});
        CHECK(tc.spec.n == 1);
        CHECK(tc.codeword_count() == 2);
        CHECK(tc.codeword(0) == std::vector<Elem>{0});
        CHECK(tc.codeword(1) == std::vector<Elem>{1});
    }
    SUBCASE("(11, F_3)") {
        const auto tc = irreducible_code_of_pair(11, {3, 1});
        CHECK(tc.spec.dim() == 5);
        CHECK(tc.codeword_count() == 243);
    }
    CHECK_THROWS_AS(irreducible_code_of_pair(6, {2, 1}), InvalidInput);
    CHECK_THROWS_AS(irreducible_code_of_pair(23, {2, 1}, 1000), BudgetExceeded);
}

TEST_CASE("trace words lie in the check-polynomial code and are linear") {
    const std::vector<std::pair<u64, nt::FieldDesc>> pairs = {
        {5, {2, 1}}, {7, {2, 1}}, {9, {2, 1}}, {11, {3, 1}}, {13, {3, 1}}, {5, {2, 2}}, {21, {2, 2}}, {8, {3, 1}},
        {13, {5, 1}}, {10, {3, 2}}};
    for (const auto& [n, q] : pairs) {
        const auto tc = irreducible_code_of_pair(n, q);
        const auto& F = *tc.bigfield;
        const auto Fq = tc.spec.coefficient_field();
        CHECK(gf::element_order(F, tc.beta) == n);
        for (Elem a = 0; a < std::min<u64>(F.size(), 200); ++a) {
            const auto wa = tc.codeword(a);
            CHECK(tc.spec.contains(wa));
            const Elem b = (a * 7 + 3) % F.size();
            const auto wb = tc.codeword(b);
            const auto wab = tc.codeword(F.add(a, b));
            for (u64 i = 0; i < n; ++i) CHECK(wab[i] == Fq->add(wa[i], wb[i]));
        }
    }
}

TEST_CASE("weight distributions") {
    const auto wd5 = weight_distribution(irreducible_code_of_pair(5, {2, 1}));
    CHECK(counts_of(wd5) == std::map<u64, u64>{{0, 1}, {2, 10}, {4, 5}});
    CHECK(wd5.to_csv() == "weight,count\n0,1\n2,10\n4,5\n");
    const auto wd11 = weight_distribution(irreducible_code_of_pair(11, {3, 1}));
    CHECK(counts_of(wd11) == std::map<u64, u64>{{0, 1}, {6, 132}, {9, 110}});
    const auto wd15 = weight_distribution(irreducible_code_of_pair(15, {2, 1}));
    CHECK(counts_of(wd15) == std::map<u64, u64>{{0, 1}, {8, 15}});
    CHECK(wd15.nonzero_weights() == std::vector<u64>{8});
}

TEST_CASE("coset weight formula matches word materialization and word scan") {
    for (auto [n, q] : std::vector<std::pair<u64, nt::FieldDesc>>{
             {5, {2, 1}}, {7, {2, 1}}, {9, {2, 1}}, {15, {2, 1}}, {17, {2, 1}}, {21, {2, 1}}, {11, {3, 1}}, {13, {3, 1}},
             {8, {3, 1}}, {5, {2, 2}}, {9, {2, 2}}, {13, {5, 1}}, {10, {3, 2}}, {24, {5, 1}}, {7, {2, 3}}}) {
        CAPTURE(n);
        CAPTURE(q.to_string());
        const auto tc = irreducible_code_of_pair(n, q);
        const auto fast = weight_distribution(tc);
        const auto slow = weight_distribution_bruteforce(tc);
        CHECK(fast.counts == slow.counts);
        u64 sum = 0;
        for (auto [w, c] : fast.counts) sum += c;
        CHECK(sum == tc.codeword_count());
        if (n <= 9 && q.p * q.e <= 4) CHECK(distribution_by_word_scan(tc.spec) == slow.counts);
    }
}

TEST_CASE("other generators of U give the same weight distribution") {
    for (auto [n, q] : std::vector<std::pair<u64, nt::FieldDesc>>{{5, {2, 1}}, {7, {2, 1}}, {9, {2, 1}}, {11, {3, 1}},
                                                                 {13, {3, 1}}, {15, {2, 1}}, {21, {2, 1}}, {8, {3, 1}},
                                                                 {13, {5, 1}}, {9, {2, 2}}}) {
        const auto base = irreducible_code_of_pair(n, q);
        const auto ref = weight_distribution_bruteforce(base).counts;
        int used = 0;
        for (u64 j = 2; j < n && used < 3; ++j) {
            if (nt::gcd(j, n) != 1) continue;
            TraceCode tc = base;
            tc.beta = base.bigfield->pow(base.beta, j);
            CHECK(weight_distribution_bruteforce(tc).counts == ref);
            ++used;
        }
    }
}

TEST_CASE("degenerate codes repeat their base words") {
    for (nt::FieldDesc q : {nt::FieldDesc{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        for (u64 n = 2; n <= 12; ++n) {
            if (n % q.p == 0) continue;
            for (const auto& h : cyclotomic_factors(n, q)) {
                const CyclicCodeSpec spec{n, q, h};
                const auto deg = is_degenerate(spec);
                if (!deg.degenerate) continue;
                CAPTURE(n);
                const auto tc = trace_code_of_spec(spec);
                const auto base = trace_code_of_spec(CyclicCodeSpec{deg.nprime, q, h});
                for (Elem a = 0; a < tc.codeword_count(); ++a) {
                    const auto w = tc.codeword(a);
                    CHECK(spec.contains(w));
                    for (u64 i = 0; i < n; ++i) CHECK(w[i] == w[i % deg.nprime]);
                }
                std::vector<u64> scaled;
                for (u64 w : weight_distribution_bruteforce(base).nonzero_weights()) scaled.push_back(w * deg.k);
                CHECK(weight_distribution_bruteforce(tc).nonzero_weights() == scaled);
                CHECK(weight_distribution(tc).counts == weight_distribution_bruteforce(tc).counts);
            }
        }
    }
}

TEST_CASE("shift and Frobenius permutations preserve every realized code") {
    for (nt::FieldDesc q : {nt::FieldDesc{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}}) {
        for (u64 n = 1; n <= 30; ++n) {
            if (n % q.p == 0) continue;
            if (nt::checked_pow(q.p, q.e * nt::mult_ord(n, q)).value_or(~u64{0}) > (1u << 16)) continue;
            const auto tc = irreducible_code_of_pair(n, q);
            const u64 qn = q.q_mod(n);
            for (const auto& row : tc.spec.generator_rows()) {
                std::vector<Elem> shifted(n), frob(n);
                for (u64 i = 0; i < n; ++i) {
                    shifted[(i + 1) % n] = row[i];
                    frob[nt::mulmod(i, qn, n)] = row[i];
                }
                CHECK(tc.spec.contains(row));
                CHECK(tc.spec.contains(shifted));
                CHECK(tc.spec.contains(frob));
            }
        }
    }
}

TEST_CASE("cyclotomic_factors multiply to x^n - 1") {
    for (nt::FieldDesc q : {nt::FieldDesc{2, 1}, {3, 1}, {2, 2}}) {
        for (u64 n = 1; n <= 20; ++n) {
            if (n % q.p == 0) continue;
            const auto Fq = gf::build_field(q.p, static_cast<unsigned>(q.e));
            if (nt::checked_pow(q.p, q.e * nt::mult_ord(n, q)).value_or(~u64{0}) > (1u << 16)) continue;
            Poly prod({1});
            for (const auto& f : cyclotomic_factors(n, q)) {
                CHECK_NOTHROW(trace_code_of_spec(CyclicCodeSpec{n, q, f}));
                prod = gf::poly_mul(*Fq, prod, f);
            }
            CHECK(prod == gf::x_pow_minus_one(*Fq, n));
        }
    }
}
