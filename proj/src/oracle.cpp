#include "nsic/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "nsic/error.hpp"

namespace nsic::oracle {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;
constexpr u64 kGreedyWork = u64{1} << 24;

class Stopwatch {
public:
    double millis() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Realized {
    u64 m = 1;
    std::shared_ptr<const gf::ExtField> F;
    std::shared_ptr<const gf::SubfieldEmbedding> emb;
    std::vector<Elem> fq;  // F_q inside F, fq[t] = to_big(t)
};

Realized realize_pair(u64 n, const FieldDesc& q, const Budget& budget) {
    nt::require_coprime(n, q);
    Realized r;
    r.m = nt::mult_ord(n, q);
    auto size = nt::checked_pow(q.p, q.e * r.m);
    if (q.e * r.m > 64 || !size || *size > budget.field || *size > gf::kLogTableLimit) {
        throw BudgetExceeded("F_{" + q.to_string() + "^" + std::to_string(r.m) + "} exceeds the field budget");
    }
    r.F = gf::build_field(q.p, static_cast<unsigned>(q.e * r.m));
    r.emb = std::make_shared<gf::SubfieldEmbedding>(r.F, static_cast<unsigned>(q.e));
    const u64 qs = r.emb->small().size();
    for (Elem t = 0; t < qs; ++t) r.fq.push_back(r.emb->to_big(t));
    return r;
}

// Span of a growing basis over F_q; an element's index in `elems`, written in
// base q, is its coordinate vector (digit i = index into fq of the i-th
// coefficient).
class Span {
public:
    Span(const gf::ExtField& F, const std::vector<Elem>& fq) : F_(F), fq_(fq), pos_(F.size(), kNone) {
        elems_.push_back(0);
        pos_[0] = 0;
    }

    bool contains(Elem a) const { return pos_[a] != kNone; }
    u64 index(Elem a) const { return pos_[a]; }
    const std::vector<Elem>& elems() const { return elems_; }

    /// Appends b; returns the newly covered elements.
    std::vector<Elem> extend(Elem b) {
        const std::size_t old = elems_.size();
        std::vector<Elem> fresh;
        for (std::size_t t = 1; t < fq_.size(); ++t) {
            const Elem tb = F_.mul(fq_[t], b);
            for (std::size_t r = 0; r < old; ++r) {
                const Elem y = F_.add(elems_[r], tb);
                pos_[y] = static_cast<std::uint32_t>(elems_.size());
                elems_.push_back(y);
                fresh.push_back(y);
            }
        }
        return fresh;
    }

    std::vector<u64> digits(Elem a, std::size_t len) const {
        std::vector<u64> d(len, 0);
        u64 j = pos_[a];
        for (std::size_t i = 0; i < len; ++i) {
            d[i] = j % fq_.size();
            j /= fq_.size();
        }
        return d;
    }

private:
    const gf::ExtField& F_;
    const std::vector<Elem>& fq_;
    std::vector<Elem> elems_;
    std::vector<std::uint32_t> pos_;
};

class StabilizerSearch {
public:
    StabilizerSearch(u64 n, const FieldDesc& q, const StabilizerOptions& opt)
        : n_(n), q_(q), opt_(opt), R_(realize_pair(n, q, opt.budget)), F_(*R_.F), U_(R_.F, n) {
        m_ = R_.m;
        const u64 qn = q.q_mod(n);
        qpow_.assign(m_, 1 % n);
        for (u64 j = 1; j < m_; ++j) qpow_[j] = nt::mulmod(qpow_[j - 1], qn, n);
        choose_basis();
    }

    StabilizerResult run() {
        Stopwatch clock;
        StabilizerResult res;
        res.n = n_;
        res.q = q_;
        res.m = m_;
        res.standard_order = n_ * m_;
        img_basis_.assign(m_, 0);
        img_.assign(n_, 0);
        used_.assign(n_, 0);
        try {
            dfs(0);
        } catch (const BudgetExceeded& e) {
            res.status = Status::Infeasible;
            res.reason = e.what();
        }
        res.nodes = nodes_;
        if (res.status == Status::Ok) {
            res.nonstandard = found_nonstandard_;
            if (!stopped_) {
                res.exact = true;
                res.order = opt_.fix_identity ? n_ * leaves_ : leaves_;
                if (res.order % res.standard_order) throw std::logic_error("n m does not divide |L(n, q)|");
                res.nonstandard = res.order > res.standard_order;
            }
            std::vector<u64> sigma(n_), psi(n_);
            for (u64 i = 0; i < n_; ++i) {
                sigma[i] = (i + 1) % n_;
                psi[i] = nt::mulmod(i, q_.q_mod(n_), n_);
            }
            res.generator_perms = {sigma, psi};
            if (found_nonstandard_) res.generator_perms.push_back(witness_);
            if (opt_.matrices) res.generators = matrices(res.generator_perms);
        }
        res.millis = clock.millis();
        return res;
    }

private:
    struct Member {
        u64 uidx;
        std::vector<std::pair<unsigned, Elem>> terms;  // (basis position, coefficient)
    };

    void choose_basis() {
        Span span(F_, R_.fq);
        std::vector<std::uint8_t> covered(n_);
        for (u64 level = 0; level < m_; ++level) {
            u64 best = kNone, best_count = 0;
            if (level == 0) {
                best = 0;  // the element 1
            } else {
                std::fill(covered.begin(), covered.end(), 0);
                u64 work = 0;
                for (u64 i = 0; i < n_ && (best == kNone || work < kGreedyWork); ++i) {
                    const Elem c = U_[i];
                    if (span.contains(c) || covered[i]) continue;
                    u64 count = 0;
                    for (std::size_t t = 1; t < R_.fq.size(); ++t) {
                        const Elem tc = F_.mul(R_.fq[t], c);
                        for (Elem s : span.elems()) {
                            if (auto idx = U_.index_of(F_.add(s, tc))) {
                                ++count;
                                covered[*idx] = 1;
                            }
                        }
                    }
                    work += span.elems().size() * (R_.fq.size() - 1);
                    if (best == kNone || count > best_count) {
                        best = i;
                        best_count = count;
                    }
                }
            }
            const Elem b = U_[best];
            basis_.push_back(b);
            basis_uidx_.push_back(best);
            std::vector<Member> members;
            for (Elem y : span.extend(b)) {
                auto idx = U_.index_of(y);
                if (!idx || *idx == best) continue;
                Member mem{*idx, {}};
                const auto d = span.digits(y, level + 1);
                for (unsigned i = 0; i <= level; ++i) {
                    if (d[i]) mem.terms.emplace_back(i, R_.fq[d[i]]);
                }
                members.push_back(std::move(mem));
            }
            members_.push_back(std::move(members));
        }
        if (span.elems().size() != F_.size()) throw std::logic_error("chosen basis does not span the field");
    }

    void dfs(u64 level) {
        const u64 cand_end = (level == 0 && opt_.fix_identity) ? 1 : n_;
        std::vector<u64> marked;
        for (u64 cand = 0; cand < cand_end; ++cand) {
            if (used_[cand]) continue;
            if (++nodes_ > opt_.budget.nodes) throw BudgetExceeded("oracle node budget exhausted");
            img_basis_[level] = U_[cand];
            used_[cand] = 1;
            img_[basis_uidx_[level]] = cand;
            marked.clear();
            bool ok = true;
            for (const Member& mem : members_[level]) {
                Elem v = 0;
                for (auto [i, lambda] : mem.terms) v = F_.add(v, F_.mul(lambda, img_basis_[i]));
                auto idx = U_.index_of(v);
                if (!idx || used_[*idx]) {
                    ok = false;
                    break;
                }
                used_[*idx] = 1;
                marked.push_back(*idx);
                img_[mem.uidx] = *idx;
            }
            if (ok) {
                if (level + 1 == m_) {
                    leaf();
                } else {
                    dfs(level + 1);
                }
            }
            for (u64 idx : marked) used_[idx] = 0;
            used_[cand] = 0;
            if (stopped_) return;
        }
    }

    void leaf() {
        ++leaves_;
        const u64 a = img_[0];
        bool standard = false;
        for (u64 j = 0; j < m_ && !standard; ++j) {
            bool match = true;
            for (u64 i = 0; i < n_ && match; ++i) match = img_[i] == (a + nt::mulmod(i, qpow_[j], n_)) % n_;
            standard = match;
        }
        if (standard) return;
        if (!found_nonstandard_) {
            found_nonstandard_ = true;
            witness_ = img_;
        }
        if (opt_.mode == Mode::Decide) stopped_ = true;
    }

    std::vector<Matrix> matrices(const std::vector<std::vector<u64>>& perms) const {
        Span span(F_, R_.fq);
        Elem x = 1;
        for (u64 i = 0; i < m_; ++i) {
            span.extend(x);
            x = F_.mul(x, U_.xi());
        }
        std::vector<Matrix> out;
        for (const auto& perm : perms) {
            Matrix M{m_, {}};
            for (u64 i = 0; i < m_; ++i) {
                for (u64 d : span.digits(U_[perm[i]], m_)) M.entries.push_back(d == 0 ? 0 : R_.emb->to_small(R_.fq[d]));
            }
            out.push_back(std::move(M));
        }
        return out;
    }

    u64 n_;
    FieldDesc q_;
    StabilizerOptions opt_;
    Realized R_;
    const gf::ExtField& F_;
    gf::SubgroupU U_;
    u64 m_ = 1;
    std::vector<u64> qpow_;
    std::vector<Elem> basis_;
    std::vector<u64> basis_uidx_;
    std::vector<std::vector<Member>> members_;
    std::vector<Elem> img_basis_;
    std::vector<u64> img_;
    std::vector<std::uint8_t> used_;
    u64 nodes_ = 0;
    u64 leaves_ = 0;
    bool stopped_ = false;
    bool found_nonstandard_ = false;
    std::vector<u64> witness_;
};

}  // namespace

std::string to_string(Status s) { return s == Status::Ok ? "ok" : "infeasible"; }

nlohmann::json StabilizerResult::to_json(bool with_generators) const {
    nlohmann::json j{{"pair", {n, q.p, q.e}},
                     {"m", m},
                     {"status", to_string(status)},
                     {"standard_order", standard_order},
                     {"nodes", nodes},
                     {"millis", millis}};
    if (status == Status::Infeasible) {
        j["verdict"] = "infeasible";
        j["order"] = nullptr;
        j["reason"] = reason;
    } else {
        j["verdict"] = nonstandard ? "NonStandard" : "Standard";
        j["order"] = exact ? nlohmann::json(order) : nlohmann::json(nullptr);
    }
    if (with_generators) {
        j["generator_perms"] = generator_perms;
        nlohmann::json mats = nlohmann::json::array();
        for (const auto& M : generators) mats.push_back(M.entries);
        j["generators"] = mats;
    }
    return j;
}

StabilizerResult linear_stabilizer(u64 n, const FieldDesc& q, const StabilizerOptions& opt) {
    try {
        StabilizerSearch search(n, q, opt);
        return search.run();
    } catch (const BudgetExceeded& e) {
        StabilizerResult res;
        res.n = n;
        res.q = q;
        res.m = nt::mult_ord(n, q);
        res.standard_order = n * res.m;
        res.status = Status::Infeasible;
        res.reason = e.what();
        return res;
    }
}

u64 permutation_group_order(u64 n, const std::vector<std::vector<u64>>& gens, u64 limit) {
    std::vector<u64> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<u64>> seen{id};
    std::vector<std::vector<u64>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::vector<u64>> next;
        for (const auto& g : frontier) {
            for (const auto& s : gens) {
                std::vector<u64> h(n);
                for (u64 i = 0; i < n; ++i) h[i] = s[g[i]];
                if (seen.insert(h).second) {
                    if (seen.size() > limit) throw BudgetExceeded("permutation group exceeds the closure limit");
                    next.push_back(std::move(h));
                }
            }
        }
        frontier = std::move(next);
    }
    return seen.size();
}

nlohmann::json LrsResult::to_json() const {
    nlohmann::json j{{"status", to_string(status)}, {"nodes", nodes}, {"millis", millis}};
    if (status == Status::Infeasible) {
        j["witness"] = "infeasible";
        j["reason"] = reason;
    } else if (witness) {
        j["witness"] = {{"f", witness->f.c}, {"arrangement", witness->arrangement}, {"is_cyclic", witness->is_cyclic}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

namespace {

class LrsSearch {
public:
    LrsSearch(u64 n, const FieldDesc& q, const Budget& budget)
        : n_(n), q_(q), budget_(budget), R_(realize_pair(n, q, budget)), F_(*R_.F), U_(R_.F, n) {
        m_ = R_.m;
        f_big_ = gf::min_poly(F_, U_.xi(), static_cast<unsigned>(q.e));
        // c_k = x^k mod f for k < n; c_k[i] is the weight of s_i in s_k.
        std::vector<Elem> c(m_, 0);
        c[0] = 1;
        determined_.assign(m_, {});
        coeffs_.assign(n, {});
        for (u64 k = 0; k < n; ++k) {
            if (k >= m_) {
                int deg = -1;
                for (u64 i = 0; i < m_; ++i) {
                    if (c[i]) deg = static_cast<int>(i);
                }
                coeffs_[k] = c;
                determined_[deg].push_back(k);
            }
            const Elem top = c[m_ - 1];
            for (u64 i = m_ - 1; i > 0; --i) c[i] = c[i - 1];
            c[0] = 0;
            if (top) {
                for (u64 i = 0; i < m_; ++i) c[i] = F_.sub(c[i], F_.mul(top, f_big_[i]));
            }
        }
        by_rank_.resize(n);
        std::iota(by_rank_.begin(), by_rank_.end(), 0);
        std::sort(by_rank_.begin(), by_rank_.end(), [&](u64 a, u64 b) { return U_[a] < U_[b]; });
    }

    LrsResult run() {
        Stopwatch clock;
        LrsResult res;
        s_.assign(n_, 0);
        used_.assign(n_, 0);
        try {
            s_[0] = 1;
            used_[0] = 1;
            std::vector<u64> marked;
            if (assign_determined(0, marked)) {
                if (m_ == 1) {
                    check_window();
                } else {
                    dfs(1);
                }
            }
        } catch (const BudgetExceeded& e) {
            res.status = Status::Infeasible;
            res.reason = e.what();
        }
        res.nodes = nodes_;
        if (res.status == Status::Ok && found_) res.witness = witness_;
        res.millis = clock.millis();
        return res;
    }

private:
    bool assign_determined(u64 j, std::vector<u64>& marked) {
        for (u64 k : determined_[j]) {
            Elem v = 0;
            for (u64 i = 0; i <= j; ++i) {
                if (coeffs_[k][i]) v = F_.add(v, F_.mul(coeffs_[k][i], s_[i]));
            }
            auto idx = U_.index_of(v);
            if (!idx || used_[*idx]) return false;
            used_[*idx] = 1;
            marked.push_back(*idx);
            s_[k] = v;
        }
        return true;
    }

    void dfs(u64 j) {
        std::vector<u64> marked;
        for (u64 cand : by_rank_) {
            if (used_[cand]) continue;
            if (++nodes_ > budget_.nodes) throw BudgetExceeded("LRS node budget exhausted");
            s_[j] = U_[cand];
            used_[cand] = 1;
            marked.clear();
            if (assign_determined(j, marked)) {
                if (j + 1 == m_) {
                    check_window();
                } else {
                    dfs(j + 1);
                }
            }
            for (u64 idx : marked) used_[idx] = 0;
            used_[cand] = 0;
            if (found_) return;
        }
    }

    // Regenerates the sequence from the window by the recurrence itself.
    void check_window() {
        std::vector<Elem> seq(s_.begin(), s_.begin() + m_);
        for (u64 k = m_; k < n_ + m_; ++k) {
            Elem v = 0;
            for (u64 i = 0; i < m_; ++i) v = F_.sub(v, F_.mul(f_big_[i], seq[k - m_ + i]));
            seq.push_back(v);
        }
        std::vector<std::uint8_t> seen(n_, 0);
        LrsWitness w;
        for (u64 k = 0; k < n_; ++k) {
            auto idx = U_.index_of(seq[k]);
            if (!idx || seen[*idx]) return;
            seen[*idx] = 1;
            w.arrangement.push_back(*idx);
        }
        for (u64 k = 0; k < m_; ++k) {
            if (seq[n_ + k] != seq[k]) return;
        }
        const Elem ratio = F_.div(seq[1 % n_], seq[0]);
        w.is_cyclic = true;
        for (u64 k = 0; k < n_ && w.is_cyclic; ++k) w.is_cyclic = seq[k + 1] == F_.mul(ratio, seq[k]);
        if (w.is_cyclic) return;
        w.f = R_.emb->poly_to_small(f_big_);
        witness_ = std::move(w);
        found_ = true;
    }

    u64 n_;
    FieldDesc q_;
    Budget budget_;
    Realized R_;
    const gf::ExtField& F_;
    gf::SubgroupU U_;
    u64 m_ = 1;
    gf::Poly f_big_;
    std::vector<std::vector<u64>> determined_;
    std::vector<std::vector<Elem>> coeffs_;
    std::vector<u64> by_rank_;
    std::vector<Elem> s_;
    std::vector<std::uint8_t> used_;
    u64 nodes_ = 0;
    bool found_ = false;
    LrsWitness witness_;
};

}  // namespace

LrsResult lrs_witness(u64 n, const FieldDesc& q, const Budget& budget) {
    try {
        LrsSearch search(n, q, budget);
        return search.run();
    } catch (const BudgetExceeded& e) {
        LrsResult res;
        res.status = Status::Infeasible;
        res.reason = e.what();
        return res;
    }
}

bool verify_lrs(u64 n, const FieldDesc& q, const LrsWitness& w) {
    const Realized R = realize_pair(n, q, Budget{});
    const gf::ExtField& F = *R.F;
    const gf::SubgroupU U(R.F, n);
    const u64 m = R.m;
    if (w.arrangement.size() != n) return false;
    if (R.emb->poly_to_small(gf::min_poly(F, U.xi(), static_cast<unsigned>(q.e))) != w.f) return false;
    const gf::Poly fb = R.emb->poly_to_big(w.f);
    std::vector<Elem> s;
    for (u64 k = 0; k < m; ++k) s.push_back(U[w.arrangement[k]]);
    for (u64 k = m; k < n + m; ++k) {
        Elem v = 0;
        for (u64 i = 0; i < m; ++i) v = F.sub(v, F.mul(fb[i], s[k - m + i]));
        s.push_back(v);
    }
    std::set<Elem> distinct;
    for (u64 k = 0; k < n; ++k) {
        if (s[k] != U[w.arrangement[k]]) return false;
        distinct.insert(s[k]);
    }
    if (distinct.size() != n) return false;
    for (u64 k = 0; k < m; ++k) {
        if (s[n + k] != s[k]) return false;
    }
    std::set<Elem> ratios;
    for (u64 k = 0; k < n; ++k) ratios.insert(F.div(s[k + 1], s[k]));
    return (ratios.size() == 1) == w.is_cyclic;
}

u64 perm_stabilizer(const code::CyclicCodeSpec& spec, std::vector<std::vector<u64>>* elements) {
    spec.validate();
    const u64 n = spec.n;
    if (n > 8) throw InvalidInput("perm_stabilizer scans S_n only for n <= 8");
    const auto rows = spec.generator_rows();
    std::vector<u64> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Elem> word(n);
    u64 count = 0;
    do {
        bool ok = true;
        for (const auto& row : rows) {
            for (u64 i = 0; i < n; ++i) word[perm[i]] = row[i];
            if (!spec.contains(word)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            ++count;
            if (elements) elements->push_back(perm);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

bool is_affine(const std::vector<u64>& perm) {
    const u64 n = perm.size();
    if (n <= 1) return true;
    const u64 a = perm[0];
    const u64 t = (perm[1] + n - a) % n;
    if (nt::gcd(t, n) != 1) return false;
    for (u64 i = 0; i < n; ++i) {
        if (perm[i] != (t * i + a) % n) return false;
    }
    return true;
}

bool is_listed_exception(const code::CyclicCodeSpec& spec) {
    const auto Fq = spec.coefficient_field();
    const gf::Poly x_minus_1({Fq->neg(1), 1});
    const gf::Poly x_plus_1({1, 1});
    const gf::Poly x2_minus_1({Fq->neg(1), 0, 1});
    const bool odd = spec.q.p != 2;
    if (spec.n == 2 && spec.h == x_minus_1 && odd) return true;
    if (spec.n == 3 && spec.h == x_minus_1 && spec.q.p != 3) return true;
    if (spec.n == 4 && odd && (spec.h == x_plus_1 || spec.h == x2_minus_1)) return true;
    return false;
}

nlohmann::json DegenerateReport::to_json() const {
    return {{"code", spec.to_json()},     {"nprime", nprime},
            {"k", k},                     {"paut", paut},
            {"paut_base", paut_base},     {"formula", formula},
            {"formula_holds", formula_holds}, {"within_affine", within_affine},
            {"listed_exception", listed_exception}};
}

DegenerateReport degenerate_order_check(const code::CyclicCodeSpec& spec) {
    spec.validate();
    const auto deg = code::is_degenerate(spec);
    if (!deg.degenerate) throw InvalidInput("degenerate_order_check needs ord(h) < n");
    DegenerateReport rep;
    rep.spec = spec;
    rep.nprime = deg.nprime;
    rep.k = deg.k;
    std::vector<std::vector<u64>> elems;
    rep.paut = perm_stabilizer(spec, &elems);
    rep.paut_base = perm_stabilizer(code::CyclicCodeSpec{deg.nprime, spec.q, spec.h});
    u64 kfact = 1;
    for (u64 i = 2; i <= deg.k; ++i) kfact *= i;
    rep.formula = rep.paut_base;
    for (u64 i = 0; i < deg.nprime; ++i) rep.formula *= kfact;
    rep.formula_holds = rep.formula == rep.paut;
    rep.within_affine = std::all_of(elems.begin(), elems.end(), [](const auto& p) { return is_affine(p); });
    rep.listed_exception = is_listed_exception(spec);
    return rep;
}

std::vector<code::CyclicCodeSpec> degenerate_specs(const std::vector<FieldDesc>& qs, u64 nmax) {
    std::vector<code::CyclicCodeSpec> out;
    for (const auto& q : qs) {
        const auto Fq = gf::build_field(q.p, static_cast<unsigned>(q.e));
        for (u64 n = 2; n <= nmax; ++n) {
            if (n % q.p == 0) continue;
            const auto factors = code::cyclotomic_factors(n, q);
            const u64 subsets = u64{1} << factors.size();
            for (u64 mask = 1; mask < subsets; ++mask) {
                gf::Poly h({1});
                for (std::size_t i = 0; i < factors.size(); ++i) {
                    if (mask >> i & 1) h = gf::poly_mul(*Fq, h, factors[i]);
                }
                if (h.degree() < 1 || static_cast<u64>(h.degree()) >= n) continue;
                if (code::poly_order(*Fq, h) < n) out.push_back(code::CyclicCodeSpec{n, q, h});
            }
        }
    }
    return out;
}

}  // namespace nsic::oracle
