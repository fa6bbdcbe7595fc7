#include "nsic/numtheory.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "nsic/error.hpp"

namespace nsic::nt {

namespace {

constexpr u64 kSieveLimit = u64{1} << 16;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = [] {
        std::vector<bool> composite(kSieveLimit + 1, false);
        std::vector<u64> out;
        for (u64 i = 2; i <= kSieveLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = i * i; j <= kSieveLimit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

// Products with a modulus above 2^64 are never needed by callers of mulmod, but
// nu_of_power_minus_one may work modulo r^j with r^j up to ~2^126.
u128 mulmod_wide(u128 a, u128 b, u128 m) {
    if (m <= (u128{1} << 64)) return (a % m) * (b % m) % m;
    a %= m;
    b %= m;
    u128 result = 0;
    while (b) {
        if (b & 1) {
            result = (result >= m - a) ? result - (m - a) : result + a;
        }
        a = (a >= m - a) ? a - (m - a) : a + a;
        b >>= 1;
    }
    return result;
}

u128 powmod_wide(u128 base, u64 exp, u128 m) {
    if (m == 1) return 0;
    u128 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod_wide(result, base, m);
        base = mulmod_wide(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (unsigned r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        const u64 m = 128;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(u64 n, std::map<u64, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

Factorization factor_uncached(u64 n) {
    Factorization f;
    f.value = n;
    u64 rest = n;
    for (u64 p : small_primes()) {
        if (p * p > rest) break;
        if (rest % p) continue;
        unsigned k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        f.factors.push_back({p, k});
    }
    if (rest > 1) {
        std::map<u64, unsigned> big;
        factor_into(rest, big);
        for (auto [p, k] : big) f.factors.push_back({p, k});
    }
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    return f;
}

class FactorCache {
public:
    std::optional<Factorization> find(u64 n) const {
        std::shared_lock lock(mutex_);
        auto it = map_.find(n);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    void insert(u64 n, const Factorization& f) {
        std::unique_lock lock(mutex_);
        if (map_.size() > kMaxEntries) map_.clear();
        map_.insert_or_assign(n, f);
    }

private:
    static constexpr std::size_t kMaxEntries = 1u << 20;
    mutable std::shared_mutex mutex_;
    std::unordered_map<u64, Factorization> map_;
};

FactorCache& factor_cache() {
    static FactorCache cache;
    return cache;
}

}  // namespace

std::vector<u64> Factorization::primes() const {
    std::vector<u64> out;
    out.reserve(factors.size());
    for (const auto& pp : factors) out.push_back(pp.prime);
    return out;
}

FieldDesc::FieldDesc(u64 prime, u64 exponent) : p(prime), e(exponent) {
    if (!is_prime(prime)) throw InvalidInput("field characteristic " + std::to_string(prime) + " is not prime");
    if (exponent == 0) throw InvalidInput("field exponent must be positive");
}

u64 FieldDesc::q_mod(u64 modulus) const {
    if (modulus == 0) throw InvalidInput("q_mod: zero modulus");
    return powmod(p, e, modulus);
}

std::optional<u64> FieldDesc::value() const { return checked_pow(p, e); }

double FieldDesc::log2q() const { return static_cast<double>(e) * std::log2(static_cast<double>(p)); }

FieldDesc FieldDesc::power(u64 t) const {
    if (t == 0) throw InvalidInput("FieldDesc::power: zero exponent");
    if (e > ~u64{0} / t) throw InvalidInput("FieldDesc::power: exponent overflow");
    return FieldDesc(p, e * t);
}

std::string FieldDesc::to_string() const {
    std::ostringstream os;
    os << p << '^' << e;
    return os.str();
}

u64 gcd(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

u64 lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    u64 g = gcd(a, b);
    u128 r = static_cast<u128>(a / g) * b;
    if (r >= (u128{1} << 64)) throw InvalidInput("lcm overflow");
    return static_cast<u64>(r);
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::optional<u64> checked_pow(u64 a, u64 k) {
    u128 r = 1;
    for (u64 i = 0; i < k; ++i) {
        r *= a;
        if (r >= kMaxInput) return std::nullopt;
        if (a <= 1) break;
    }
    return static_cast<u64>(r);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

Factorization factor(u64 n) {
    if (n == 0 || n > kMaxInput) throw InvalidInput("factor: input out of range [1, 2^63]");
    if (n < 64) return factor_uncached(n);
    auto& cache = factor_cache();
    if (auto hit = cache.find(n)) return *hit;
    Factorization f = factor_uncached(n);
    cache.insert(n, f);
    return f;
}

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> out{1};
    for (const auto& [p, k] : f.factors) {
        const std::size_t base = out.size();
        u64 pk = 1;
        for (unsigned i = 1; i <= k; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> divisors(u64 n) { return divisors(factor(n)); }

u64 euler_phi(u64 n) {
    u64 phi = n;
    for (const auto& pp : factor(n).factors) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

u64 carmichael(u64 n) {
    u64 lambda = 1;
    for (const auto& [p, k] : factor(n).factors) {
        u64 l;
        if (p == 2) {
            l = k == 1 ? 1 : (k == 2 ? 2 : (u64{1} << (k - 2)));
        } else {
            l = p - 1;
            for (unsigned i = 1; i < k; ++i) l *= p;
        }
        lambda = lcm(lambda, l);
    }
    return lambda;
}

u64 mult_ord(u64 n, u64 a) {
    if (n == 0) throw InvalidInput("mult_ord: zero modulus");
    if (n == 1) return 1;
    a %= n;
    if (gcd(a, n) != 1) throw InvalidInput("mult_ord: base not coprime to modulus");
    u64 ord = carmichael(n);
    for (const auto& pp : factor(ord).factors) {
        while (ord % pp.prime == 0 && powmod(a, ord / pp.prime, n) == 1) ord /= pp.prime;
    }
    return ord;
}

u64 mult_ord(u64 n, const FieldDesc& q) {
    require_coprime(n, q);
    if (n == 1) return 1;
    return mult_ord(n, q.q_mod(n));
}

u64 mult_ord_naive(u64 n, u64 a) {
    if (n == 1) return 1;
    a %= n;
    if (gcd(a, n) != 1) throw InvalidInput("mult_ord_naive: base not coprime to modulus");
    u64 x = a;
    u64 k = 1;
    while (x != 1) {
        x = mulmod(x, a, n);
        ++k;
    }
    return k;
}

unsigned nu(u64 p, u64 n) {
    if (p < 2) throw InvalidInput("nu: p must be prime");
    if (n == 0) throw InvalidInput("nu: n must be positive");
    unsigned k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

unsigned nu_of_power_minus_one(u64 r, const FieldDesc& q, u64 k, unsigned cap) {
    if (q.p == r) throw InvalidInput("nu_of_power_minus_one: r equals the characteristic");
    // q^k mod r^j, increasing j; q^k = p^(e*k) so the exponent is kept as a
    // pair to avoid overflow of e*k.
    unsigned j = 0;
    u128 modulus = 1;
    while (j < cap) {
        if (modulus > (~u128{0}) / r / 4) break;
        modulus *= r;
        u128 qm = powmod_wide(q.p, q.e, modulus);
        u128 val = powmod_wide(qm, k, modulus);
        if (val != 1 % modulus) break;
        ++j;
    }
    return j;
}

LteReport lte_check(u64 r, u64 N, LteMode mode, u64 e) {
    if (!is_prime(r)) throw InvalidInput("lte_check: r must be prime");
    if (N < 2) throw InvalidInput("lte_check: N must be at least 2");
    LteReport rep;
    rep.f = nu(r, N - 1);
    rep.hypothesis_met = rep.f >= 1;
    if (!rep.hypothesis_met) return rep;
    auto valuation_of = [&](u64 exponent) {
        // nu_r(N^exponent - 1) by working modulo increasing powers of r.
        unsigned j = 0;
        u128 modulus = 1;
        for (;;) {
            if (modulus > (~u128{0}) / r / 4) break;
            modulus *= r;
            if (powmod_wide(N, exponent, modulus) != 1 % modulus) break;
            ++j;
        }
        return j;
    };
    if (mode == LteMode::CoprimeExponent) {
        if (e == 0 || e % r == 0) throw InvalidInput("lte_check: exponent must be positive and coprime to r");
        rep.exponent = e;
        rep.valuation = valuation_of(e);
        rep.predicted = rep.f;
        rep.holds = rep.valuation == rep.f;
    } else {
        rep.exponent = r;
        rep.valuation = valuation_of(r);
        if (r == 2 && rep.f == 1) {
            rep.predicted = rep.f + 2;
            rep.lower_bound_only = true;
            rep.holds = rep.valuation >= rep.predicted;
        } else {
            rep.predicted = rep.f + 1;
            rep.holds = rep.valuation == rep.predicted;
        }
    }
    return rep;
}

void require_coprime(u64 n, const FieldDesc& q) {
    if (n == 0) throw InvalidInput("length must be positive");
    if (n % q.p == 0) {
        throw InvalidInput("gcd(" + std::to_string(n) + ", " + std::to_string(q.p) + ") != 1");
    }
}

std::vector<u64> star_prime_set(u64 nprime, const FieldDesc& q) {
    require_coprime(nprime, q);
    std::vector<u64> out;
    if (nprime == 1) return out;
    const u64 m = mult_ord(nprime, q);
    for (const auto& [r, k] : factor(nprime).factors) {
        // r^k | q^m - 1 always; equality iff r^(k+1) does not divide it.
        if (nu_of_power_minus_one(r, q, m, k + 1) == k) out.push_back(r);
    }
    return out;
}

bool equally_spaced_direct(u64 n, u64 nprime, const FieldDesc& q) {
    if (nprime == 0 || n % nprime != 0) throw InvalidInput("equally_spaced: n' must divide n");
    require_coprime(n, q);
    const u64 k = n / nprime;
    const u64 m = mult_ord(n, q);
    const u64 mp = mult_ord(nprime, q);
    return static_cast<u128>(k) * mp == m;
}

bool equally_spaced_criterion(u64 n, u64 nprime, const FieldDesc& q) {
    if (nprime == 0 || n % nprime != 0) throw InvalidInput("equally_spaced: n' must divide n");
    require_coprime(n, q);
    const u64 k = n / nprime;
    if (k == 1) return true;
    const auto star = star_prime_set(nprime, q);
    auto in_star = [&](u64 r) { return std::binary_search(star.begin(), star.end(), r); };
    for (const auto& pp : factor(k).factors) {
        if (!in_star(pp.prime)) return false;
    }
    if (in_star(2) && nprime % 4 == 2 && nu(2, k) > 1) return false;
    return true;
}

bool equally_spaced_ok(u64 n, u64 nprime, const FieldDesc& q) {
    const bool direct = equally_spaced_direct(n, nprime, q);
    assert(direct == equally_spaced_criterion(n, nprime, q));
    return direct;
}

}  // namespace nsic::nt
