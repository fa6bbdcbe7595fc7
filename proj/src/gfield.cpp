#include "nsic/gfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "nsic/error.hpp"

namespace nsic::gf {

namespace {

using Digits = std::vector<u64>;

Digits to_digits(Elem a, u64 p, unsigned k) {
    Digits d(k, 0);
    for (unsigned i = 0; i < k && a; ++i) {
        d[i] = a % p;
        a /= p;
    }
    return d;
}

Elem from_digits(const Digits& d, u64 p) {
    Elem r = 0;
    for (std::size_t i = d.size(); i-- > 0;) r = r * p + d[i];
    return r;
}

// a * b mod f over F_p, a and b of length k, f monic of degree k.
Digits mul_digits(const Digits& a, const Digits& b, const std::vector<u64>& f, u64 p) {
    const std::size_t k = f.size() - 1;
    Digits prod(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (!b[j]) continue;
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    for (std::size_t i = 2 * k; i-- > k;) {
        const u64 c = prod[i];
        if (!c) continue;
        for (std::size_t j = 0; j <= k; ++j) {
            prod[i - k + j] = (prod[i - k + j] + (p - c) * f[j]) % p;
        }
    }
    prod.resize(k);
    return prod;
}

}  // namespace

void Poly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string Poly::to_string() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << ',';
        os << c[i];
    }
    return os.str();
}

Poly Poly::parse(const std::string& s) {
    std::vector<Elem> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) throw InvalidInput("bad coefficient '" + item + "'");
        } catch (const std::logic_error&) {
            throw InvalidInput("bad coefficient '" + item + "'");
        }
    }
    return Poly(std::move(out));
}

ExtField::ExtField(u64 p, unsigned k, std::vector<u64> modulus) : p_(p), k_(k), modulus_(std::move(modulus)) {
    if (k == 0) throw InvalidInput("field degree must be positive");
    auto sz = nt::checked_pow(p, k);
    if (!sz || *sz > kArithmeticLimit) {
        throw BudgetExceeded("field " + std::to_string(p) + "^" + std::to_string(k) + " exceeds the arithmetic budget");
    }
    size_ = *sz;
    if (modulus_.size() != k + 1 || modulus_.back() != 1) throw InvalidInput("modulus must be monic of degree k");
    if (size_ == 2) {
        generator_ = 1;
    } else {
        for (Elem r = 1; r < size_; ++r) {
            if (order_poly(r) == size_ - 1) {
                generator_ = r;
                break;
            }
        }
    }
    if (size_ <= kLogTableLimit) build_tables();
}

void ExtField::build_tables() {
    const u64 q1 = size_ - 1;
    log_.assign(size_, kNoLog);
    exp_.assign(q1, 0);
    Digits cur = to_digits(1, p_, k_);
    const Digits g = to_digits(generator_, p_, k_);
    for (u64 i = 0; i < q1; ++i) {
        const Elem r = from_digits(cur, p_);
        exp_[i] = static_cast<std::uint32_t>(r);
        log_[r] = static_cast<std::uint32_t>(i);
        cur = mul_digits(cur, g, modulus_, p_);
    }
    zech_.assign(q1, kNoLog);
    for (u64 i = 0; i < q1; ++i) {
        const Elem r = exp_[i];
        const Elem plus_one = r - r % p_ + (r % p_ + 1) % p_;
        zech_[i] = plus_one == 0 ? kNoLog : log_[plus_one];
    }
}

Elem ExtField::add_digits(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    Elem r = 0, place = 1;
    while (a || b) {
        r += ((a % p_ + b % p_) % p_) * place;
        a /= p_;
        b /= p_;
        place *= p_;
    }
    return r;
}

Elem ExtField::add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (a == 0) return b;
    if (b == 0) return a;
    if (log_.empty()) return add_digits(a, b);
    const u64 q1 = size_ - 1;
    const u64 la = log_[a];
    const u64 d = (log_[b] + q1 - la) % q1;
    const std::uint32_t z = zech_[d];
    if (z == kNoLog) return 0;
    return exp_[(la + z) % q1];
}

Elem ExtField::neg(Elem a) const {
    if (p_ == 2 || a == 0) return a;
    Elem r = 0, place = 1;
    while (a) {
        r += ((p_ - a % p_) % p_) * place;
        a /= p_;
        place *= p_;
    }
    return r;
}

Elem ExtField::mul_poly(Elem a, Elem b) const {
    if (k_ == 1) return nt::mulmod(a, b, p_);
    return from_digits(mul_digits(to_digits(a, p_, k_), to_digits(b, p_, k_), modulus_, p_), p_);
}

Elem ExtField::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (log_.empty()) return mul_poly(a, b);
    const u64 s = static_cast<u64>(log_[a]) + log_[b];
    const u64 q1 = size_ - 1;
    return exp_[s >= q1 ? s - q1 : s];
}

Elem ExtField::pow(Elem a, u64 e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!log_.empty()) {
        const u64 q1 = size_ - 1;
        return exp_[static_cast<u64>(static_cast<nt::u128>(log_[a]) * (e % q1) % q1)];
    }
    Elem result = 1;
    Elem base = a;
    while (e) {
        if (e & 1) result = mul_poly(result, base);
        base = mul_poly(base, base);
        e >>= 1;
    }
    return result;
}

Elem ExtField::inv(Elem a) const {
    if (a == 0) throw InvalidInput("inverse of zero");
    if (!log_.empty()) {
        const u64 q1 = size_ - 1;
        return exp_[(q1 - log_[a]) % q1];
    }
    return pow(a, size_ - 2);
}

Elem ExtField::frobenius(Elem a, u64 t) const {
    t %= k_;
    if (t == 0 || a == 0) return a;
    if (!log_.empty()) {
        const u64 q1 = size_ - 1;
        return exp_[nt::mulmod(log_[a], nt::powmod(p_, t, q1), q1)];
    }
    for (u64 i = 0; i < t; ++i) a = pow(a, p_);
    return a;
}

u64 ExtField::log(Elem a) const {
    if (log_.empty()) throw BudgetExceeded("field " + to_string() + " has no log table");
    if (a == 0 || a >= size_) throw InvalidInput("log of zero or out-of-range element");
    return log_[a];
}

Elem ExtField::exp(u64 i) const {
    if (exp_.empty()) return pow(generator_, i);
    return exp_[i % (size_ - 1)];
}

u64 ExtField::order_poly(Elem a) const {
    const u64 q1 = size_ - 1;
    u64 ord = q1;
    for (const auto& pp : nt::factor(q1).factors) {
        while (ord % pp.prime == 0) {
            Elem r = 1, b = a;
            u64 e = ord / pp.prime;
            while (e) {
                if (e & 1) r = mul_poly(r, b);
                b = mul_poly(b, b);
                e >>= 1;
            }
            if (r != 1) break;
            ord /= pp.prime;
        }
    }
    return ord;
}

std::vector<u64> ExtField::coeffs(Elem a) const { return to_digits(a, p_, k_); }

Elem ExtField::from_coeffs(const std::vector<u64>& c) const {
    if (c.size() > k_) throw InvalidInput("coefficient vector longer than the field degree");
    Digits d(c.begin(), c.end());
    for (auto& x : d) {
        if (x >= p_) throw InvalidInput("coefficient not reduced mod p");
    }
    return from_digits(d, p_);
}

std::string ExtField::to_string() const {
    std::ostringstream os;
    os << p_ << '^' << k_ << ':';
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
        if (i) os << ',';
        os << modulus_[i];
    }
    return os.str();
}

bool is_irreducible_mod_p(const std::vector<u64>& f, u64 p) {
    Poly F(f);
    const int d = F.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    if (F.c[0] == 0) return false;
    const auto Fp = build_field(p, 1);
    F = poly_monic(*Fp, F);
    const Poly x({0, 1});
    Poly h = x;
    for (int i = 1; i <= d / 2; ++i) {
        h = poly_powmod(*Fp, h, p, F);
        Poly g = poly_gcd(*Fp, poly_sub(*Fp, h, x), F);
        if (g.degree() != 0) return false;
    }
    return true;
}

std::vector<u64> canonical_modulus(u64 p, unsigned k) {
    if (k == 0) throw InvalidInput("field degree must be positive");
    if (!nt::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    if (k == 1) return {1, 1};
    auto lim = nt::checked_pow(p, k);
    if (!lim || *lim > kArithmeticLimit) throw BudgetExceeded("field exceeds the arithmetic budget");
    for (u64 v = 1; v < *lim; ++v) {
        if (v % p == 0) continue;
        Digits d = to_digits(v, p, k);
        d.push_back(1);
        if (is_irreducible_mod_p(d, p)) return d;
    }
    throw std::logic_error("no irreducible polynomial found");
}

std::shared_ptr<const ExtField> build_field(u64 p, unsigned k) {
    static std::mutex mutex;
    static std::map<std::pair<u64, unsigned>, std::shared_ptr<const ExtField>> cache;
    if (k == 0) throw InvalidInput("field degree must be positive");
    if (!nt::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    auto sz = nt::checked_pow(p, k);
    if (!sz || *sz > kArithmeticLimit) {
        throw BudgetExceeded("field " + std::to_string(p) + "^" + std::to_string(k) + " exceeds the arithmetic budget");
    }
    {
        std::lock_guard lock(mutex);
        auto it = cache.find({p, k});
        if (it != cache.end()) return it->second;
    }
    // Built outside the lock: irreducibility tests recurse into build_field(p, 1).
    auto F = std::make_shared<const ExtField>(p, k, canonical_modulus(p, k));
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(std::make_pair(p, k), F);
    return it->second;
}

u64 element_order(const ExtField& F, Elem a) {
    if (a == 0) throw InvalidInput("element_order: zero element");
    const u64 q1 = F.group_order();
    if (F.has_log_table()) return q1 / nt::gcd(F.log(a), q1);
    u64 ord = q1;
    for (const auto& pp : nt::factor(q1).factors) {
        while (ord % pp.prime == 0 && F.pow(a, ord / pp.prime) == 1) ord /= pp.prime;
    }
    return ord;
}

Elem find_element_of_order(const ExtField& F, u64 n) {
    if (n == 0 || F.group_order() % n != 0) {
        throw InvalidInput(std::to_string(n) + " does not divide " + std::to_string(F.group_order()));
    }
    return F.pow(F.generator(), F.group_order() / n);
}

Elem rel_trace(const ExtField& F, Elem a, unsigned sub_degree) {
    if (sub_degree == 0 || F.k() % sub_degree != 0) throw InvalidInput("trace degree must divide the field degree");
    Elem s = 0;
    for (unsigned i = 0; i < F.k() / sub_degree; ++i) s = F.add(s, F.frobenius(a, static_cast<u64>(sub_degree) * i));
    return s;
}

Poly min_poly(const ExtField& F, Elem a, unsigned sub_degree) {
    if (sub_degree == 0 || F.k() % sub_degree != 0) throw InvalidInput("subfield degree must divide the field degree");
    std::vector<Elem> conj{a};
    for (Elem c = F.frobenius(a, sub_degree); c != a; c = F.frobenius(c, sub_degree)) conj.push_back(c);
    Poly f({1});
    for (Elem c : conj) f = poly_mul(F, f, Poly({F.neg(c), 1}));
    return f;
}

SubgroupU::SubgroupU(std::shared_ptr<const ExtField> F, u64 n) : field_(std::move(F)) {
    const ExtField& f = *field_;
    const Elem xi = find_element_of_order(f, n);
    cofactor_ = f.group_order() / n;
    elems_.reserve(n);
    Elem cur = 1;
    for (u64 i = 0; i < n; ++i) {
        elems_.push_back(cur);
        cur = f.mul(cur, xi);
    }
    if (!f.has_log_table()) {
        index_.reserve(n);
        for (u64 i = 0; i < n; ++i) index_.emplace(elems_[i], i);
    }
}

std::optional<u64> SubgroupU::index_of(Elem a) const {
    if (a == 0 || a >= field_->size()) return std::nullopt;
    if (field_->has_log_table()) {
        const u64 l = field_->log(a);
        if (l % cofactor_) return std::nullopt;
        return l / cofactor_;
    }
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SubfieldEmbedding::SubfieldEmbedding(std::shared_ptr<const ExtField> big, unsigned d) : big_(std::move(big)) {
    const ExtField& F = *big_;
    if (d == 0 || F.k() % d != 0) throw InvalidInput("subfield degree must divide the field degree");
    small_ = build_field(F.p(), d);
    const ExtField& S = *small_;
    const u64 step = F.group_order() / S.group_order();
    const Elem h = F.pow(F.generator(), step);
    const Poly mod(std::vector<Elem>(S.modulus().begin(), S.modulus().end()));
    Elem zeta = 0;
    bool found = false;
    Elem cur = 1;
    for (u64 j = 0; j < S.group_order(); ++j) {
        if (poly_eval(F, mod, cur) == 0 && (!found || cur < zeta)) {
            zeta = cur;
            found = true;
        }
        cur = F.mul(cur, h);
    }
    if (!found) throw std::logic_error("subfield modulus has no root");
    std::vector<Elem> zpow(d);
    zpow[0] = 1;
    for (unsigned i = 1; i < d; ++i) zpow[i] = F.mul(zpow[i - 1], zeta);
    to_big_.resize(S.size());
    for (Elem a = 0; a < S.size(); ++a) {
        const auto c = S.coeffs(a);
        Elem b = 0;
        for (unsigned i = 0; i < d; ++i) {
            if (c[i]) b = F.add(b, F.mul(F.scalar(c[i]), zpow[i]));
        }
        to_big_[a] = b;
        to_small_.emplace(b, a);
    }
}

Elem SubfieldEmbedding::to_small(Elem b) const {
    auto it = to_small_.find(b);
    if (it == to_small_.end()) throw InvalidInput("element " + std::to_string(b) + " is not in the subfield");
    return it->second;
}

Poly SubfieldEmbedding::poly_to_small(const Poly& f) const {
    Poly out;
    out.c.reserve(f.c.size());
    for (Elem c : f.c) out.c.push_back(to_small(c));
    out.trim();
    return out;
}

Poly SubfieldEmbedding::poly_to_big(const Poly& f) const {
    Poly out;
    out.c.reserve(f.c.size());
    for (Elem c : f.c) out.c.push_back(to_big(c));
    out.trim();
    return out;
}

Poly poly_add(const ExtField& R, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = R.add(a[i], b[i]);
    r.trim();
    return r;
}

Poly poly_sub(const ExtField& R, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = R.sub(a[i], b[i]);
    r.trim();
    return r;
}

Poly poly_mul(const ExtField& R, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            if (!b.c[j]) continue;
            r.c[i + j] = R.add(r.c[i + j], R.mul(a.c[i], b.c[j]));
        }
    }
    r.trim();
    return r;
}

Poly poly_scale(const ExtField& R, const Poly& a, Elem s) {
    Poly r;
    r.c.reserve(a.c.size());
    for (Elem c : a.c) r.c.push_back(R.mul(c, s));
    r.trim();
    return r;
}

std::pair<Poly, Poly> poly_divmod(const ExtField& R, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw InvalidInput("polynomial division by zero");
    Poly rem = a;
    if (rem.degree() < b.degree()) return {Poly{}, rem};
    const Elem lead_inv = R.inv(b.lead());
    const int db = b.degree();
    Poly quo;
    quo.c.assign(rem.degree() - db + 1, 0);
    for (int i = rem.degree(); i >= db; --i) {
        const Elem c = rem.c[i];
        if (!c) continue;
        const Elem t = R.mul(c, lead_inv);
        quo.c[i - db] = t;
        for (int j = 0; j <= db; ++j) rem.c[i - db + j] = R.sub(rem.c[i - db + j], R.mul(t, b.c[j]));
    }
    rem.trim();
    quo.trim();
    return {quo, rem};
}

Poly poly_mod(const ExtField& R, const Poly& a, const Poly& b) { return poly_divmod(R, a, b).second; }

Poly poly_monic(const ExtField& R, const Poly& a) {
    if (a.is_zero()) return a;
    return poly_scale(R, a, R.inv(a.lead()));
}

Poly poly_gcd(const ExtField& R, Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_mod(R, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(R, a);
}

Poly poly_powmod(const ExtField& R, const Poly& base, u64 e, const Poly& mod) {
    Poly result = poly_mod(R, Poly({1}), mod);
    Poly b = poly_mod(R, base, mod);
    while (e) {
        if (e & 1) result = poly_mod(R, poly_mul(R, result, b), mod);
        e >>= 1;
        if (e) b = poly_mod(R, poly_mul(R, b, b), mod);
    }
    return result;
}

Elem poly_eval(const ExtField& R, const Poly& f, Elem x) {
    Elem r = 0;
    for (std::size_t i = f.c.size(); i-- > 0;) r = R.add(R.mul(r, x), f.c[i]);
    return r;
}

Poly x_pow_minus_one(const ExtField& R, u64 n) {
    Poly f;
    f.c.assign(n + 1, 0);
    f.c[0] = R.neg(1);
    f.c[n] = 1;
    f.trim();
    return f;
}

Poly poly_reciprocal_monic(const ExtField& R, const Poly& f) {
    Poly r;
    r.c.assign(f.c.rbegin(), f.c.rend());
    r.trim();
    return poly_monic(R, r);
}

}  // namespace nsic::gf
