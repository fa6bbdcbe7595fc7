#include "nsic/cycliccode.hpp"

#include <sstream>

#include "nsic/error.hpp"

namespace nsic::code {

namespace {

std::shared_ptr<const gf::ExtField> realize(const FieldDesc& q, u64 degree, u64 budget) {
    const u64 k = q.e * degree;
    auto size = nt::checked_pow(q.p, k);
    if (!size || *size > budget || *size > gf::kArithmeticLimit) {
        throw BudgetExceeded("F_{" + q.to_string() + "^" + std::to_string(degree) + "} is unrealizable at desk scale");
    }
    return gf::build_field(q.p, static_cast<unsigned>(k));
}

}  // namespace

std::shared_ptr<const gf::ExtField> CyclicCodeSpec::coefficient_field() const {
    return realize(q, 1, gf::kArithmeticLimit);
}

void CyclicCodeSpec::validate() const {
    nt::require_coprime(n, q);
    if (h.is_zero() || h.lead() != 1) throw InvalidInput("check polynomial must be monic");
    const auto Fq = coefficient_field();
    for (Elem c : h.c) {
        if (c >= Fq->size()) throw InvalidInput("check polynomial coefficient outside F_q");
    }
    if (!gf::poly_mod(*Fq, gf::x_pow_minus_one(*Fq, n), h).is_zero()) {
        throw InvalidInput("check polynomial does not divide x^" + std::to_string(n) + " - 1");
    }
}

Poly CyclicCodeSpec::generator_poly() const {
    const auto Fq = coefficient_field();
    auto [quo, rem] = gf::poly_divmod(*Fq, gf::x_pow_minus_one(*Fq, n), h);
    if (!rem.is_zero()) throw InvalidInput("check polynomial does not divide x^n - 1");
    return quo;
}

bool CyclicCodeSpec::contains(const std::vector<Elem>& word) const {
    if (word.size() != n) throw InvalidInput("word length differs from code length");
    const auto Fq = coefficient_field();
    for (u64 t = 0; t < n; ++t) {
        Elem s = 0;
        for (std::size_t j = 0; j < h.c.size(); ++j) {
            if (!h.c[j]) continue;
            const Elem c = word[(t + n - j % n) % n];
            if (c) s = Fq->add(s, Fq->mul(h.c[j], c));
        }
        if (s) return false;
    }
    return true;
}

std::vector<std::vector<Elem>> CyclicCodeSpec::generator_rows() const {
    const Poly g = generator_poly();
    std::vector<std::vector<Elem>> rows;
    for (u64 i = 0; i < dim(); ++i) {
        std::vector<Elem> row(n, 0);
        for (std::size_t j = 0; j < g.c.size(); ++j) row[(i + j) % n] = g.c[j];
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json CyclicCodeSpec::to_json() const {
    return {{"n", n}, {"p", q.p}, {"e", q.e}, {"h", h.c}, {"dim", dim()}};
}

u64 poly_order(const gf::ExtField& Fq, const Poly& h) {
    if (h.is_zero() || h[0] == 0) throw InvalidInput("poly_order: h(0) must be nonzero");
    const int d = h.degree();
    if (d == 0) return 1;
    const Poly H = gf::poly_monic(Fq, h);
    auto cap = nt::checked_pow(Fq.size(), static_cast<u64>(d));
    if (!cap || *cap > (u64{1} << 32)) throw BudgetExceeded("poly_order: search space too large");
    // cur = x^N mod H, multiplied by x in place.
    std::vector<Elem> cur(d, 0);
    if (d == 1) {
        cur[0] = Fq.neg(H[0]);
    } else {
        cur[1] = 1;
    }
    for (u64 N = 1; N < *cap; ++N) {
        bool is_one = cur[0] == 1;
        for (int i = 1; i < d && is_one; ++i) is_one = cur[i] == 0;
        if (is_one) return N;
        const Elem top = cur[d - 1];
        for (int i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (top) {
            for (int i = 0; i < d; ++i) cur[i] = Fq.sub(cur[i], Fq.mul(top, H[i]));
        }
    }
    throw InvalidInput("poly_order: x is not invertible modulo h");
}

Degeneracy is_degenerate(const CyclicCodeSpec& spec) {
    const auto Fq = spec.coefficient_field();
    Degeneracy d;
    d.nprime = poly_order(*Fq, spec.h);
    if (spec.n % d.nprime) throw InvalidInput("ord(h) does not divide n");
    d.k = spec.n / d.nprime;
    d.degenerate = d.nprime < spec.n;
    return d;
}

u64 TraceCode::codeword_count() const { return bigfield->size(); }

std::vector<Elem> TraceCode::codeword(Elem alpha) const {
    const gf::ExtField& F = *bigfield;
    const unsigned e = static_cast<unsigned>(spec.q.e);
    std::vector<Elem> w(spec.n);
    Elem x = alpha;
    for (u64 i = 0; i < spec.n; ++i) {
        w[i] = subfield->to_small(gf::rel_trace(F, x, e));
        x = F.mul(x, beta);
    }
    return w;
}

TraceCode irreducible_code_of_pair(u64 n, const FieldDesc& q, u64 field_budget) {
    nt::require_coprime(n, q);
    const u64 m = nt::mult_ord(n, q);
    TraceCode tc;
    tc.bigfield = realize(q, m, field_budget);
    tc.subfield = std::make_shared<gf::SubfieldEmbedding>(tc.bigfield, static_cast<unsigned>(q.e));
    tc.mprime = m;
    tc.beta = gf::find_element_of_order(*tc.bigfield, n);
    const Poly hb = gf::min_poly(*tc.bigfield, tc.bigfield->inv(tc.beta), static_cast<unsigned>(q.e));
    tc.spec = CyclicCodeSpec{n, q, tc.subfield->poly_to_small(hb)};
    return tc;
}

TraceCode trace_code_of_spec(const CyclicCodeSpec& spec, u64 field_budget) {
    spec.validate();
    TraceCode tc;
    tc.spec = spec;
    tc.mprime = spec.dim();
    tc.bigfield = realize(spec.q, tc.mprime, field_budget);
    const gf::ExtField& F = *tc.bigfield;
    const unsigned e = static_cast<unsigned>(spec.q.e);
    tc.subfield = std::make_shared<gf::SubfieldEmbedding>(tc.bigfield, e);
    const Poly hb = tc.subfield->poly_to_big(spec.h);
    for (Elem r = 1; r < F.size(); ++r) {
        if (gf::poly_eval(F, hb, r) != 0) continue;
        if (gf::min_poly(F, r, e) != hb) throw InvalidInput("check polynomial is not irreducible");
        tc.beta = F.inv(r);
        return tc;
    }
    throw InvalidInput("check polynomial is not irreducible");
}

void for_each_codeword(const TraceCode& tc, const std::function<void(Elem, const std::vector<Elem>&)>& f,
                       u64 budget) {
    if (tc.codeword_count() > budget) throw BudgetExceeded("codeword enumeration exceeds the budget");
    for (Elem a = 0; a < tc.codeword_count(); ++a) f(a, tc.codeword(a));
}

std::vector<u64> WeightDistribution::nonzero_weights() const {
    std::vector<u64> out;
    for (auto [w, c] : counts) {
        if (w && c) out.push_back(w);
    }
    return out;
}

std::string WeightDistribution::to_csv() const {
    std::ostringstream os;
    os << "weight,count\n";
    for (auto [w, c] : counts) os << w << ',' << c << '\n';
    return os.str();
}

nlohmann::json WeightDistribution::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (auto [w, c] : counts) j[std::to_string(w)] = c;
    return {{"n", n}, {"total", total}, {"weights", j}};
}

WeightDistribution weight_distribution(const TraceCode& tc, u64 budget) {
    const gf::ExtField& F = *tc.bigfield;
    if (F.size() > budget) throw BudgetExceeded("weight enumeration exceeds the budget");
    if (!F.has_log_table()) throw BudgetExceeded("weight enumeration needs a log table");
    const u64 q1 = F.group_order();
    const u64 nprime = gf::element_order(F, tc.beta);
    const u64 k = tc.spec.n / nprime;
    const u64 u = q1 / nprime;
    const u64 qmod = tc.spec.q.q_mod(q1);
    const u64 mq = F.k() / tc.spec.q.e;  // [F : F_q]

    std::vector<u64> qpow(mq);
    qpow[0] = 1 % q1;
    for (u64 i = 1; i < mq; ++i) qpow[i] = nt::mulmod(qpow[i - 1], qmod, q1);
    std::vector<bool> nonzero(q1);
    for (u64 l = 0; l < q1; ++l) {
        Elem s = 0;
        for (u64 i = 0; i < mq; ++i) s = F.add(s, F.exp(nt::mulmod(l, qpow[i], q1)));
        nonzero[l] = s != 0;
    }
    WeightDistribution wd;
    wd.n = tc.spec.n;
    wd.total = F.size();
    wd.counts[0] = 1;
    for (u64 a = 0; a < u; ++a) {
        u64 cnt = 0;
        for (u64 j = 0; j < nprime; ++j) cnt += nonzero[a + u * j];
        wd.counts[k * cnt] += nprime;
    }
    return wd;
}

WeightDistribution weight_distribution_bruteforce(const TraceCode& tc, u64 budget) {
    WeightDistribution wd;
    wd.n = tc.spec.n;
    wd.total = tc.codeword_count();
    for_each_codeword(
        tc,
        [&](Elem, const std::vector<Elem>& w) {
            u64 weight = 0;
            for (Elem c : w) weight += c != 0;
            ++wd.counts[weight];
        },
        budget);
    return wd;
}

std::vector<Poly> cyclotomic_factors(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    const u64 m = nt::mult_ord(n, q);
    auto F = realize(q, m, gf::kArithmeticLimit);
    const gf::SubfieldEmbedding emb(F, static_cast<unsigned>(q.e));
    const Elem xi = gf::find_element_of_order(*F, n);
    const u64 qn = q.q_mod(n);
    std::vector<bool> seen(n, false);
    std::vector<Poly> out;
    for (u64 j = 0; j < n; ++j) {
        if (seen[j]) continue;
        for (u64 t = j; !seen[t]; t = nt::mulmod(t, qn, n)) seen[t] = true;
        out.push_back(emb.poly_to_small(gf::min_poly(*F, F->pow(xi, j), static_cast<unsigned>(q.e))));
    }
    return out;
}

}  // namespace nsic::code
