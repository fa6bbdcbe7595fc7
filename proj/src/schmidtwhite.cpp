#include "nsic/schmidtwhite.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "nsic/density.hpp"
#include "nsic/error.hpp"
#include "nsic/gfield.hpp"

namespace nsic::sw {

namespace {

u64 field_size(const FieldDesc& q, u64 m) {
    const auto qv = q.value();
    const auto Q = qv ? nt::checked_pow(*qv, m) : std::nullopt;
    if (!Q) throw BudgetExceeded("q^m does not fit in 63 bits");
    return *Q;
}

u64 q_value(const FieldDesc& q) {
    const auto qv = q.value();
    if (!qv) throw BudgetExceeded("q does not fit in 63 bits");
    return *qv;
}

// nonzero[l] = (Tr(g^l) != 0) for the canonical generator g of F_{q^m}.
class TraceTables {
public:
    std::shared_ptr<const std::vector<std::uint8_t>> get(const FieldDesc& q, u64 m) {
        const auto key = std::make_tuple(q.p, q.e, m);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        const auto F = gf::build_field(q.p, static_cast<unsigned>(q.e * m));
        const u64 q1 = F->group_order();
        const u64 qmod = q.q_mod(q1);
        std::vector<u64> qpow(m);
        qpow[0] = 1 % q1;
        for (u64 i = 1; i < m; ++i) qpow[i] = nt::mulmod(qpow[i - 1], qmod, q1);
        auto table = std::make_shared<std::vector<std::uint8_t>>(q1);
        for (u64 l = 0; l < q1; ++l) {
            gf::Elem s = 0;
            for (u64 i = 0; i < m; ++i) s = F->add(s, F->exp(nt::mulmod(l, qpow[i], q1)));
            (*table)[l] = s != 0;
        }
        std::lock_guard lock(mutex_);
        if (cache_.size() >= 32) cache_.clear();
        cache_.emplace(key, table);
        return table;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<u64, u64, u64>, std::shared_ptr<const std::vector<std::uint8_t>>> cache_;
};

TraceTables& trace_tables() {
    static TraceTables t;
    return t;
}

class WeightMemo {
public:
    std::optional<std::vector<u64>> find(const CqmuCode& c) {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(key(c));
        if (it == memo_.end()) return std::nullopt;
        return it->second;
    }
    void store(const CqmuCode& c, const std::vector<u64>& w) {
        std::lock_guard lock(mutex_);
        memo_.emplace(key(c), w);
    }

private:
    static std::tuple<u64, u64, u64, u64> key(const CqmuCode& c) { return {c.q.p, c.q.e, c.m, c.u}; }
    std::mutex mutex_;
    std::map<std::tuple<u64, u64, u64, u64>, std::vector<u64>> memo_;
};

WeightMemo& weight_memo() {
    static WeightMemo w;
    return w;
}

std::string join(const std::vector<u64>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

// Every n | q^m - 1 with ord_n(q) = m.
std::vector<u64> lengths_of_order(const FieldDesc& q, u64 m) {
    std::vector<u64> out;
    for (u64 n : nt::divisors(field_size(q, m) - 1)) {
        if (nt::mult_ord(n, q) == m) out.push_back(n);
    }
    return out;
}

std::size_t weight_count(const FieldDesc& q, u64 m, u64 u) { return weights(make_code(q, m, u)).size(); }

}  // namespace

u64 CqmuCode::delta() const { return (field_size(q, m) - 1) / (q_value(q) - 1); }

code::TraceCode CqmuCode::trace_code() const { return code::irreducible_code_of_pair(n, q); }

std::string CqmuCode::to_string() const {
    return "C(" + q.to_string() + "," + std::to_string(m) + "," + std::to_string(u) + ")";
}

CqmuCode make_code(const FieldDesc& q, u64 m, u64 u) {
    if (m == 0 || u == 0) throw InvalidInput("C(q, m, u) needs m, u >= 1");
    const u64 Q = field_size(q, m);
    if ((Q - 1) % u) throw InvalidInput("u must divide q^m - 1");
    CqmuCode c{q, m, u, (Q - 1) / u};
    if (nt::mult_ord(c.n, q) != m) throw InvalidInput(c.to_string() + " is degenerate: ord_n(q) < m");
    return c;
}

CqmuCode code_of_pair(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    const u64 m = nt::mult_ord(n, q);
    return make_code(q, m, (field_size(q, m) - 1) / n);
}

u64 u_delta(const FieldDesc& q, u64 m, u64 u) {
    const u64 Q = field_size(q, m);
    if (u == 0 || (Q - 1) % u) throw InvalidInput("u must divide q^m - 1");
    return nt::gcd(u, (Q - 1) / (q_value(q) - 1));
}

std::vector<u64> weights(const CqmuCode& c, u64 budget) {
    if (auto w = weight_memo().find(c)) return *w;
    const u64 Q = field_size(c.q, c.m);
    if (Q > budget || Q > gf::kLogTableLimit) throw BudgetExceeded("weight enumeration of " + c.to_string() + " exceeds the budget");
    const auto table = trace_tables().get(c.q, c.m);
    const auto& nz = *table;
    std::vector<u64> seen;
    for (u64 a = 0; a < c.u; ++a) {
        u64 cnt = 0;
        for (u64 l = a; l < Q - 1; l += c.u) cnt += nz[l];
        seen.push_back(cnt);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    weight_memo().store(c, seen);
    return seen;
}

bool is_one_weight(const CqmuCode& c, bool debug) {
    const bool one = u_delta(c.q, c.m, c.u) == 1;
    if (debug && (weights(c).size() == 1) != one) {
        throw std::logic_error(c.to_string() + ": weight count disagrees with u_delta");
    }
    return one;
}

TwoWeight is_two_weight(const CqmuCode& c, u64 budget) {
    TwoWeight t;
    t.weights = weights(c, budget);
    t.two_weight = t.weights.size() == 2;
    return t;
}

Semiprimitive semiprimitive(const FieldDesc& q, u64 m, u64 u) {
    Semiprimitive s;
    s.u_delta = u_delta(q, m, u);
    if (s.u_delta == 1) {
        s.semiprimitive = true;
        s.j = 0;
        return s;
    }
    if (s.u_delta == 2) {
        s.semiprimitive = true;
        s.j = 1;
        return s;
    }
    const u64 ud = s.u_delta;
    u64 x = q.p % ud;
    for (u64 j = 1; j <= ud; ++j) {
        if (x == ud - 1) {
            s.semiprimitive = true;
            s.j = j;
            return s;
        }
        if (x == 1) break;
        x = nt::mulmod(x, q.p, ud);
    }
    return s;
}

bool is_semiprimitive(const FieldDesc& q, u64 m, u64 u) { return semiprimitive(q, m, u).semiprimitive; }

bool is_subfield_code(const CqmuCode& c) {
    const u64 Q = field_size(c.q, c.m);
    if (Q > gf::kLogTableLimit) throw BudgetExceeded("subfield test needs a log table");
    const auto F = gf::build_field(c.q.p, static_cast<unsigned>(c.q.e * c.m));
    const u64 q1 = Q - 1;
    const u64 s = nt::lcm(c.n, q_value(c.q) - 1);
    const u64 step = q1 / s;
    // S* is the subgroup of order s; S = S* + {0} is a field iff 1 + S* lies in S.
    for (u64 k = 0; k < s; ++k) {
        const gf::Elem y = F->add(1, F->exp(k * step));
        if (y != 0 && F->log(y) % step) return false;
    }
    return true;
}

bool is_exception(u64 n, const FieldDesc& q) { return q == FieldDesc{3, 1} && (n == 11 || n == 22); }

std::string AuditRow::csv_row() const {
    std::ostringstream os;
    os << n << ',' << q.p << ',' << q.e << ',' << m << ',' << u << ',' << cls::to_string(verdict) << ','
       << join(weights, ';') << ',' << yes_no(semiprimitive) << ',' << yes_no(subfield) << ',' << yes_no(exception)
       << ',' << status;
    return os.str();
}

nlohmann::json AuditRow::to_json() const {
    nlohmann::json bs = nlohmann::json::array();
    for (auto k : bases) bs.push_back(cls::to_string(k));
    return {{"pair", {n, q.p, q.e}},
            {"m", m},
            {"u", u},
            {"verdict", cls::to_string(verdict)},
            {"weights", weights},
            {"semiprimitive", semiprimitive},
            {"witness_j", witness_j ? nlohmann::json(*witness_j) : nlohmann::json(nullptr)},
            {"subfield", subfield},
            {"exception", exception},
            {"bases", bs},
            {"status", status}};
}

std::string Audit::to_csv() const {
    std::string s = std::string(kAuditHeader) + "\n";
    for (const auto& r : rows) s += r.csv_row() + "\n";
    return s;
}

nlohmann::json Audit::to_json() const {
    nlohmann::json rs = nlohmann::json::array(), vs = nlohmann::json::array();
    for (const auto& r : rows) rs.push_back(r.to_json());
    for (const auto& r : violations) vs.push_back(r.to_json());
    return {{"rows", rs}, {"violations", vs}, {"two_weight", two_weight}, {"skipped", skipped}};
}

std::vector<FieldDesc> prime_powers_up_to(u64 bound) {
    std::vector<FieldDesc> out;
    for (u64 v = 2; v <= bound; ++v) {
        const auto f = nt::factor(v);
        if (f.factors.size() == 1) out.emplace_back(f.factors[0].prime, f.factors[0].exponent);
    }
    return out;
}

Audit sw_audit(u64 qm_limit, const std::vector<FieldDesc>& fields, unsigned threads, u64 budget) {
    std::vector<FieldDesc> qs = fields;
    if (qs.empty()) {
        u64 r = 1;
        while ((r + 1) * (r + 1) <= qm_limit) ++r;
        qs = prime_powers_up_to(r);
    }
    std::vector<std::pair<FieldDesc, u64>> units;
    for (const auto& q : qs) {
        const u64 qv = q_value(q);
        u64 Q = qv;
        for (u64 m = 2; Q <= qm_limit / qv; ++m) {
            Q *= qv;
            units.emplace_back(q, m);
        }
    }
    std::vector<std::vector<AuditRow>> results(units.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < units.size();) {
            const auto& [q, m] = units[i];
            for (u64 n : lengths_of_order(q, m)) {
                const auto pc = cls::classify(n, q);
                if (!pc.nonstandard()) continue;
                AuditRow row;
                row.n = n;
                row.q = q;
                row.m = m;
                row.u = (field_size(q, m) - 1) / n;
                row.verdict = pc.verdict;
                row.exception = is_exception(n, q);
                row.bases = cls::matching_bases(n, q);
                const auto c = make_code(q, m, row.u);
                try {
                    row.weights = weights(c, budget);
                    row.subfield = is_subfield_code(c);
                } catch (const BudgetExceeded&) {
                    row.status = "skipped";
                    results[i].push_back(std::move(row));
                    continue;
                }
                const auto sp = semiprimitive(q, m, row.u);
                row.semiprimitive = sp.semiprimitive;
                row.witness_j = sp.j;
                if (row.weights.size() != 2) {
                    row.status = "exempt";
                } else {
                    row.status = (row.semiprimitive || row.exception) ? "pass" : "violation";
                }
                results[i].push_back(std::move(row));
            }
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(density::worker_count(threads), units.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Audit audit;
    for (auto& rs : results) {
        for (auto& r : rs) audit.rows.push_back(std::move(r));
    }
    std::sort(audit.rows.begin(), audit.rows.end(), [](const AuditRow& a, const AuditRow& b) {
        return std::tie(a.q.p, a.q.e, a.n) < std::tie(b.q.p, b.q.e, b.n);
    });
    for (const auto& r : audit.rows) {
        audit.two_weight += r.weights.size() == 2;
        audit.skipped += r.status == "skipped";
        if (r.status == "violation") audit.violations.push_back(r);
    }
    return audit;
}

nlohmann::json LemmaSweep::to_json() const {
    return {{"name", name},
            {"instances", instances},
            {"two_weight", two_weight},
            {"mismatches", mismatches},
            {"side_failures", side_failures},
            {"not_semiprimitive", not_semiprimitive},
            {"failures", failures}};
}

LemmaCase verify_lift(const FieldDesc& q, u64 n, u64 t) {
    nt::require_coprime(n, q);
    const u64 m = nt::mult_ord(n, q);
    if (std::min(m, t) < 2 || nt::gcd(m, t) != 1) throw InvalidInput("lift check needs gcd(m, t) = 1 and min(m, t) >= 2");
    const FieldDesc qt = q.power(t);
    const u64 uprime = (field_size(qt, m) - 1) / n;
    LemmaCase lc;
    lc.lhs = weight_count(qt, m, uprime) == 2;
    const u64 qv = q_value(q);
    const u64 n0 = nt::gcd(n, qv - 1);
    const u64 delta = (field_size(q, m) - 1) / (qv - 1);
    lc.rhs = std::min(m, t) == 2 && n == n0 * delta && nt::gcd((qv - 1) / n0, delta) == 1;
    if (lc.lhs) {
        lc.semiprimitive_ok = is_semiprimitive(qt, m, uprime);
        lc.side_ok = lc.semiprimitive_ok && n == n0 * delta && weight_count(q, m, (qv - 1) / n0) == 1;
    }
    return lc;
}

LemmaCase verify_spaced(const FieldDesc& q, u64 n, u64 n0) {
    nt::require_coprime(n, q);
    if (n0 == 0 || n % n0 || n / n0 < 2) throw InvalidInput("spaced check needs n = n0 r with r >= 2");
    const u64 r = n / n0;
    const u64 m = nt::mult_ord(n, q);
    const u64 m0 = nt::mult_ord(n0, q);
    if (m != r * m0) throw InvalidInput("spaced check needs ord_n(q) = r ord_n0(q)");
    const u64 u = (field_size(q, m) - 1) / n;
    const u64 u0 = (field_size(q, m0) - 1) / n0;
    LemmaCase lc;
    lc.lhs = weight_count(q, m, u) == 2;
    lc.rhs = weight_count(q, m0, u0) == 1 && r == 2;
    if (lc.lhs) lc.side_ok = lc.semiprimitive_ok = is_semiprimitive(q, m, u);
    return lc;
}

LemmaCase verify_product(const FieldDesc& q, u64 n, u64 s) {
    nt::require_coprime(n, q);
    nt::require_coprime(s, q);
    const u64 m = nt::mult_ord(n, q);
    const u64 t = nt::mult_ord(s, q);
    if (m < 2 || t < 2 || nt::gcd(m, t) != 1) throw InvalidInput("product check needs coprime orders m, t > 1");
    const u64 nprime = nt::lcm(n, s);
    const u64 uprime = (field_size(q, m * t) - 1) / nprime;
    const std::size_t w1 = weight_count(q, m, (field_size(q, m) - 1) / n);
    const std::size_t w2 = weight_count(q, t, (field_size(q, t) - 1) / s);
    LemmaCase lc;
    lc.lhs = weight_count(q, m * t, uprime) == 2;
    const bool case1 = std::min(m, t) == 2 && w1 == 1 && w2 == 1;
    const bool case2 = (w1 == 2 && m == 2 && w2 == 1) || (w2 == 2 && t == 2 && w1 == 1);
    lc.rhs = case1 || case2;
    if (lc.lhs) lc.side_ok = lc.semiprimitive_ok = is_semiprimitive(q, m * t, uprime);
    return lc;
}

namespace {

void record(LemmaSweep& sw, const LemmaCase& lc, const std::string& label) {
    ++sw.instances;
    sw.two_weight += lc.lhs;
    if (lc.lhs != lc.rhs) {
        ++sw.mismatches;
        sw.failures.push_back(label + " mismatch lhs=" + yes_no(lc.lhs) + " rhs=" + yes_no(lc.rhs));
    }
    if (!lc.side_ok) {
        ++sw.side_failures;
        sw.failures.push_back(label + (lc.semiprimitive_ok ? " implied one-weight base missing" : " not semiprimitive"));
    }
    sw.not_semiprimitive += !lc.semiprimitive_ok;
}

// Prime powers q with q^k <= limit.
std::vector<FieldDesc> bases_for(u64 limit, u64 k) {
    u64 r = 1;
    while (true) {
        auto v = nt::checked_pow(r + 1, k);
        if (!v || *v > limit) break;
        ++r;
    }
    return prime_powers_up_to(r);
}

}  // namespace

LemmaSweep sweep_lift(u64 limit) {
    LemmaSweep sw;
    sw.name = "lift";
    for (const auto& q : bases_for(limit, 6)) {
        const u64 qv = q_value(q);
        for (u64 m = 2; nt::checked_pow(qv, 2 * m).value_or(limit + 1) <= limit; ++m) {
            for (u64 t = 2; nt::checked_pow(qv, m * t).value_or(limit + 1) <= limit; ++t) {
                if (nt::gcd(m, t) != 1) continue;
                for (u64 n : lengths_of_order(q, m)) {
                    record(sw, verify_lift(q, n, t),
                           "q=" + q.to_string() + " n=" + std::to_string(n) + " t=" + std::to_string(t));
                }
            }
        }
    }
    return sw;
}

LemmaSweep sweep_spaced(u64 limit) {
    LemmaSweep sw;
    sw.name = "spaced";
    for (const auto& q : bases_for(limit, 2)) {
        const u64 qv = q_value(q);
        for (u64 m = 2; nt::checked_pow(qv, m).value_or(limit + 1) <= limit; ++m) {
            for (u64 n : lengths_of_order(q, m)) {
                for (u64 n0 : nt::divisors(n)) {
                    const u64 r = n / n0;
                    if (r < 2 || m != r * nt::mult_ord(n0, q)) continue;
                    record(sw, verify_spaced(q, n, n0),
                           "q=" + q.to_string() + " n=" + std::to_string(n) + " n0=" + std::to_string(n0));
                }
            }
        }
    }
    return sw;
}

LemmaSweep sweep_product(u64 limit) {
    LemmaSweep sw;
    sw.name = "product";
    for (const auto& q : bases_for(limit, 6)) {
        const u64 qv = q_value(q);
        for (u64 m = 2; nt::checked_pow(qv, 2 * m).value_or(limit + 1) <= limit; ++m) {
            for (u64 t = m + 1; nt::checked_pow(qv, m * t).value_or(limit + 1) <= limit; ++t) {
                if (nt::gcd(m, t) != 1) continue;
                for (u64 n : lengths_of_order(q, m)) {
                    for (u64 s : lengths_of_order(q, t)) {
                        record(sw, verify_product(q, n, s),
                               "q=" + q.to_string() + " n=" + std::to_string(n) + " s=" + std::to_string(s));
                    }
                }
            }
        }
    }
    return sw;
}

}  // namespace nsic::sw
