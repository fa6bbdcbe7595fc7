#include "nsic/classifier.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "nsic/error.hpp"

namespace nsic::cls {

namespace {

using u128 = nt::u128;

std::shared_ptr<const Derivation> make_node(u64 n, const FieldDesc& q, Kind kind, u64 a = 0, u64 b = 0,
                                            std::shared_ptr<const Derivation> child = nullptr) {
    auto d = std::make_shared<Derivation>();
    d->n = n;
    d->q = q;
    d->kind = kind;
    d->a = a;
    d->b = b;
    d->child = std::move(child);
    return d;
}

// q^k - 1 = 0 (mod mod), with mod up to 2^63.
bool q_power_is_one(const FieldDesc& q, u64 k, u64 mod) {
    if (mod == 1) return true;
    return nt::powmod(q.q_mod(mod), k, mod) == 1;
}

}  // namespace

std::string to_string(Kind k) {
    switch (k) {
        case Kind::Repetition: return "Repetition";
        case Kind::FullGroup: return "FullGroup";
        case Kind::Ovoid: return "Ovoid";
        case Kind::Golay: return "Golay";
        case Kind::EquallySpaced: return "EquallySpaced";
        case Kind::Ext: return "Ext";
        case Kind::Lift: return "Lift";
        case Kind::Descend: return "Descend";
        case Kind::Product: return "Product";
    }
    throw std::logic_error("unknown derivation kind");
}

Kind kind_from_string(const std::string& s) {
    for (Kind k : {Kind::Repetition, Kind::FullGroup, Kind::Ovoid, Kind::Golay, Kind::EquallySpaced, Kind::Ext,
                   Kind::Lift, Kind::Descend, Kind::Product}) {
        if (to_string(k) == s) return k;
    }
    throw InvalidInput("unknown derivation kind '" + s + "'");
}

bool is_base(Kind k) {
    return k == Kind::Repetition || k == Kind::FullGroup || k == Kind::Ovoid || k == Kind::Golay ||
           k == Kind::EquallySpaced;
}

std::string to_string(Verdict v) { return v == Verdict::Standard ? "Standard" : "NonStandard"; }

int Derivation::depth() const { return child ? 1 + child->depth() : 1; }

nlohmann::json Derivation::to_json() const {
    nlohmann::json j;
    j["pair"] = {n, q.p, q.e};
    j["kind"] = to_string(kind);
    switch (kind) {
        case Kind::EquallySpaced:
            j["nprime"] = a;
            j["k"] = b;
            break;
        case Kind::Ext: j["u"] = a; break;
        case Kind::Lift: j["t"] = a; break;
        case Kind::Descend: j["r"] = a; break;
        case Kind::Product:
            j["n1"] = a;
            j["s"] = b;
            break;
        default: break;
    }
    if (child) j["child"] = child->to_json();
    return j;
}

std::shared_ptr<const Derivation> Derivation::from_json(const nlohmann::json& j) {
    try {
        const auto& pair = j.at("pair");
        auto d = std::make_shared<Derivation>();
        d->n = pair.at(0).get<u64>();
        d->q = FieldDesc(pair.at(1).get<u64>(), pair.at(2).get<u64>());
        d->kind = kind_from_string(j.at("kind").get<std::string>());
        switch (d->kind) {
            case Kind::EquallySpaced:
                d->a = j.at("nprime").get<u64>();
                d->b = j.at("k").get<u64>();
                break;
            case Kind::Ext: d->a = j.at("u").get<u64>(); break;
            case Kind::Lift: d->a = j.at("t").get<u64>(); break;
            case Kind::Descend: d->a = j.at("r").get<u64>(); break;
            case Kind::Product:
                d->a = j.at("n1").get<u64>();
                d->b = j.at("s").get<u64>();
                break;
            default: break;
        }
        if (j.contains("child")) d->child = from_json(j.at("child"));
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed derivation: ") + e.what());
    }
}

std::string PairClass::csv_row() const {
    std::ostringstream os;
    os << n << ',' << q.p << ',' << q.e << ',' << m << ',' << to_string(verdict) << ','
       << (derivation ? derivation->depth() : 0);
    return os.str();
}

nlohmann::json PairClass::to_json() const {
    nlohmann::json j{{"pair", {n, q.p, q.e}}, {"m", m}, {"n0", n0}, {"n1", n1}, {"verdict", to_string(verdict)}};
    j["derivation"] = derivation ? derivation->to_json() : nlohmann::json(nullptr);
    return j;
}

u64 gcd_q_minus_one(u64 n, const FieldDesc& q) {
    if (n == 1) return 1;
    const u64 r = q.q_mod(n);
    return nt::gcd(n, (r + n - 1) % n);
}

bool base_repetition(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    return q.e == 1 && n >= 5 && nt::is_prime(n) && nt::mult_ord(n, q) == n - 1;
}

bool base_fullgroup(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    const u64 m = nt::mult_ord(n, q);
    if (m < 2) return false;
    if (m == 2 && q.p == 2 && q.e == 1) return false;
    // p^(e m) >= 2^(e m) exceeds every admissible n once e m > 63.
    if (q.e > 63 || m > 63 || q.e * m > 63) return false;
    auto qm = nt::checked_pow(q.p, q.e * m);
    return qm && *qm - 1 == n;
}

bool base_ovoid(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    auto qv = q.value();
    if (!qv || *qv > (u64{1} << 21)) return false;
    const u128 target = static_cast<u128>(*qv - 1) * (static_cast<u128>(*qv) * *qv + 1);
    return target == n && nt::mult_ord(n, q) == 4;
}

bool base_golay(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    return (n == 23 && q.p == 2 && q.e == 1) || (n == 11 && q.p == 3 && q.e == 1);
}

std::optional<std::pair<u64, u64>> base_equally_spaced(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    if (n < 6) return std::nullopt;
    for (u64 k : nt::divisors(n)) {
        if (k < 2) continue;
        if (nt::equally_spaced_ok(n, n / k, q)) return std::make_pair(n / k, k);
    }
    return std::nullopt;
}

std::vector<Kind> matching_bases(u64 n, const FieldDesc& q) {
    std::vector<Kind> out;
    if (base_repetition(n, q)) out.push_back(Kind::Repetition);
    if (base_fullgroup(n, q)) out.push_back(Kind::FullGroup);
    if (base_ovoid(n, q)) out.push_back(Kind::Ovoid);
    if (base_golay(n, q)) out.push_back(Kind::Golay);
    if (base_equally_spaced(n, q)) out.push_back(Kind::EquallySpaced);
    return out;
}

void check_measure(u64 n, const FieldDesc& q, u64 child_n, const FieldDesc& child_q) {
    const auto parent = std::make_tuple(n, nt::mult_ord(n, q), q.e);
    const auto child = std::make_tuple(child_n, nt::mult_ord(child_n, child_q), child_q.e);
    if (!(child < parent)) {
        throw std::logic_error("termination measure did not decrease from (" + std::to_string(n) + ", " +
                               q.to_string() + ") to (" + std::to_string(child_n) + ", " + child_q.to_string() +
                               ")");
    }
}

std::vector<std::shared_ptr<const Derivation>> Classifier::candidates(u64 n, const FieldDesc& q, bool first_only) {
    std::vector<std::shared_ptr<const Derivation>> out;
    auto done = [&] { return first_only && !out.empty(); };
    auto step = [&](u64 cn, const FieldDesc& cq, Kind kind, u64 a, u64 b = 0) {
        check_measure(n, q, cn, cq);
        if (auto child = lookup_or_search(cn, cq)) out.push_back(make_node(n, q, kind, a, b, child));
    };

    if (base_repetition(n, q)) out.push_back(make_node(n, q, Kind::Repetition));
    if (done()) return out;
    if (base_fullgroup(n, q)) out.push_back(make_node(n, q, Kind::FullGroup));
    if (done()) return out;
    if (base_ovoid(n, q)) out.push_back(make_node(n, q, Kind::Ovoid));
    if (done()) return out;
    if (base_golay(n, q)) out.push_back(make_node(n, q, Kind::Golay));
    if (done()) return out;
    if (auto es = base_equally_spaced(n, q)) out.push_back(make_node(n, q, Kind::EquallySpaced, es->first, es->second));
    if (done()) return out;

    const auto divs = nt::divisors(n);
    for (u64 u : divs) {
        if (u == 1) continue;
        const u64 n1 = n / u;
        const u64 g = gcd_q_minus_one(n1, q);
        if (q_power_is_one(q, 1, u * g)) step(n1, q, Kind::Ext, u);
        if (done()) return out;
    }
    for (u64 t : nt::divisors(q.e)) {
        if (t == 1) continue;
        const FieldDesc q0(q.p, q.e / t);
        if (nt::gcd(nt::mult_ord(n, q0), t) == 1) step(n, q0, Kind::Lift, t);
        if (done()) return out;
    }
    for (u64 n1 : divs) {
        if (n1 == n) continue;
        const u64 m1 = nt::mult_ord(n1, q);
        for (u64 s : divs) {
            if (s == 1 || nt::lcm(n1, s) != n) continue;
            const u64 t = nt::mult_ord(s, q);
            if (t > 1 && nt::gcd(m1, t) == 1) step(n1, q, Kind::Product, n1, s);
            if (done()) return out;
        }
    }
    const u64 m = nt::mult_ord(n, q);
    for (u64 r : nt::divisors(m)) {
        if (r == 1) continue;
        step(n, q.power(r), Kind::Descend, r);
        if (done()) return out;
    }
    return out;
}

std::shared_ptr<const Derivation> Classifier::search(u64 n, const FieldDesc& q) {
    if (n <= 3 || nt::mult_ord(n, q) == 1) return nullptr;
    auto c = candidates(n, q, true);
    return c.empty() ? nullptr : c.front();
}

std::shared_ptr<const Derivation> Classifier::lookup_or_search(u64 n, const FieldDesc& q) {
    const Key key{n, q.p, q.e};
    {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    auto result = search(n, q);
    std::unique_lock lock(mutex_);
    memo_.insert_or_assign(key, result);
    return result;
}

PairClass Classifier::classify(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    PairClass pc;
    pc.n = n;
    pc.q = q;
    pc.m = nt::mult_ord(n, q);
    pc.n0 = gcd_q_minus_one(n, q);
    pc.n1 = n / pc.n0;
    pc.derivation = lookup_or_search(n, q);
    pc.verdict = pc.derivation ? Verdict::NonStandard : Verdict::Standard;
    return pc;
}

std::vector<std::shared_ptr<const Derivation>> Classifier::all_derivations(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    if (n <= 3 || nt::mult_ord(n, q) == 1) return {};
    return candidates(n, q, false);
}

std::size_t Classifier::memo_size() const {
    std::shared_lock lock(mutex_);
    return memo_.size();
}

void Classifier::clear() {
    std::unique_lock lock(mutex_);
    memo_.clear();
}

Classifier& default_classifier() {
    static Classifier c;
    return c;
}

PairClass classify(u64 n, const FieldDesc& q) { return default_classifier().classify(n, q); }

PairClass classify_m2(u64 n, const FieldDesc& q) {
    nt::require_coprime(n, q);
    PairClass pc;
    pc.n = n;
    pc.q = q;
    pc.m = nt::mult_ord(n, q);
    if (pc.m != 2) throw InvalidInput("classify_m2 requires ord_n(q) = 2");
    pc.n0 = gcd_q_minus_one(n, q);
    pc.n1 = n / pc.n0;
    auto qv = q.value();
    if (!qv || *qv > (u64{1} << 31)) throw InvalidInput("classify_m2 requires q < 2^31");
    const u64 Q = *qv;
    bool hit = false;
    // (1) n = q^2 - 1 > 3
    if (n == Q * Q - 1 && n > 3) hit = true;
    // (2) n = 2 n0 > 4 with (q - 1) / n0 odd
    if (!hit && n == 2 * pc.n0 && n > 4 && ((Q - 1) / pc.n0) % 2 == 1) hit = true;
    // (3) n = k (q0^2 - 1), q = q0^t with t > 1 odd, k | (q - 1)/(q0 - 1)
    for (u64 t : nt::divisors(q.e)) {
        if (hit) break;
        if (t == 1 || t % 2 == 0) continue;
        const u64 q0 = *nt::checked_pow(q.p, q.e / t);
        const u64 base = q0 * q0 - 1;
        if (base <= 3 || n % base) continue;
        const u64 k = n / base;
        if (((Q - 1) / (q0 - 1)) % k == 0) hit = true;
    }
    pc.verdict = hit ? Verdict::NonStandard : Verdict::Standard;
    return pc;
}

namespace {

// Order certificate: q^m = 1 (mod n) and q^(m/r) != 1 for every prime r | m.
bool is_order(u64 n, const FieldDesc& q, u64 m) {
    if (m == 0) return false;
    if (!q_power_is_one(q, m, n)) return false;
    for (u64 r : nt::factor(m).primes()) {
        if (q_power_is_one(q, m / r, n)) return false;
    }
    return true;
}

u64 certified_order(u64 n, const FieldDesc& q) {
    const u64 m = nt::mult_ord(n, q);
    if (!is_order(n, q, m)) throw std::logic_error("order certificate failed");
    return m;
}

void replay_node(const Derivation& d, ReplayReport& rep) {
    ++rep.nodes;
    auto fail = [&](const std::string& why) {
        throw InvalidInput("(" + std::to_string(d.n) + ", " + d.q.to_string() + ") " + to_string(d.kind) + ": " + why);
    };
    if (d.n == 0 || d.n % d.q.p == 0) fail("length not coprime to the characteristic");
    if (is_base(d.kind) && d.child) fail("base node with a child");
    if (!is_base(d.kind) && !d.child) fail("step node without a child");
    const u64 n = d.n;
    const FieldDesc& q = d.q;
    const u64 m = certified_order(n, q);
    auto expect_child = [&](u64 cn, const FieldDesc& cq) {
        if (d.child->n != cn || !(d.child->q == cq)) fail("child pair does not match the construction");
        check_measure(n, q, cn, cq);
    };
    switch (d.kind) {
        case Kind::Repetition:
            if (q.e != 1 || n < 5 || !nt::is_prime(n) || !is_order(n, q, n - 1)) fail("repetition hypotheses");
            break;
        case Kind::FullGroup: {
            if (m < 2 || (m == 2 && q.p == 2 && q.e == 1)) fail("(m, q) excluded");
            u128 acc = 1;
            for (u64 i = 0; i < q.e * m && acc <= n + 1; ++i) acc *= q.p;
            if (acc != static_cast<u128>(n) + 1) fail("n != q^m - 1");
            break;
        }
        case Kind::Ovoid: {
            auto qv = q.value();
            if (!qv) fail("q too large");
            const u128 Q = *qv;
            if ((Q - 1) * (Q * Q + 1) != n) fail("n != (q-1)(q^2+1)");
            if (!q_power_is_one(q, 4, n) || q_power_is_one(q, 2, n)) fail("order is not 4");
            break;
        }
        case Kind::Golay:
            if (!((n == 23 && q.p == 2 && q.e == 1) || (n == 11 && q.p == 3 && q.e == 1))) fail("not a Golay pair");
            break;
        case Kind::EquallySpaced: {
            const u64 np = d.a, k = d.b;
            if (n < 6 || k < 2 || np == 0 || static_cast<u128>(np) * k != n) fail("bad (n', k)");
            if (!is_order(n, q, k * certified_order(np, q))) fail("ord_n(q) != k ord_n'(q)");
            break;
        }
        case Kind::Ext: {
            const u64 u = d.a;
            if (u < 2 || n % u) fail("u does not divide n");
            const u64 n1 = n / u;
            u64 g = n1;
            for (u64 c : nt::divisors(n1)) {
                if (q_power_is_one(q, 1, c)) g = c;  // largest divisor of n1 dividing q - 1
            }
            if (!q_power_is_one(q, 1, u * g)) fail("u does not divide (q-1)/gcd(n1, q-1)");
            expect_child(n1, q);
            break;
        }
        case Kind::Lift: {
            const u64 t = d.a;
            if (t < 2 || q.e % t) fail("t does not divide e");
            const FieldDesc q0(q.p, q.e / t);
            if (nt::gcd(certified_order(n, q0), t) != 1) fail("gcd(ord_n(q0), t) != 1");
            expect_child(n, q0);
            break;
        }
        case Kind::Descend: {
            const u64 r = d.a;
            if (r < 2 || m % r) fail("r does not divide m");
            expect_child(n, q.power(r));
            break;
        }
        case Kind::Product: {
            const u64 n1 = d.a, s = d.b;
            if (n1 == 0 || s < 2 || n % n1 || n % s || n1 >= n) fail("bad (n1, s)");
            if (nt::lcm(n1, s) != n) fail("lcm(n1, s) != n");
            const u64 t = certified_order(s, q);
            if (t < 2 || nt::gcd(certified_order(n1, q), t) != 1) fail("order conditions");
            expect_child(n1, q);
            break;
        }
    }
    if (d.child) replay_node(*d.child, rep);
}

}  // namespace

ReplayReport replay(const Derivation& d) {
    ReplayReport rep;
    try {
        replay_node(d, rep);
    } catch (const std::exception& e) {
        rep.ok = false;
        rep.error = e.what();
    }
    return rep;
}

}  // namespace nsic::cls
