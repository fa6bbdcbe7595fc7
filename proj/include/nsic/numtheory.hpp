#pragma once

// Exact 64-bit number theory: factorization, multiplicative orders, p-adic
// valuations and the equally-spaced order criterion.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsic::nt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxInput = u64{1} << 63;

struct PrimePower {
    u64 prime;
    unsigned exponent;
    bool operator==(const PrimePower&) const = default;
};

/// value = prod prime^exponent, primes strictly increasing.
struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;

    std::vector<u64> primes() const;
    bool operator==(const Factorization&) const = default;
};

/// Symbolic prime power q = p^e. q itself is never materialized, so e may be
/// far larger than 64 / log2(p).
struct FieldDesc {
    u64 p = 2;
    u64 e = 1;

    FieldDesc() = default;
    FieldDesc(u64 prime, u64 exponent);

    /// q mod modulus (modulus >= 1).
    u64 q_mod(u64 modulus) const;
    /// q as an integer when it fits below 2^63.
    std::optional<u64> value() const;
    /// Upper bound on log2(q).
    double log2q() const;
    FieldDesc power(u64 t) const;
    std::string to_string() const;

    bool operator==(const FieldDesc&) const = default;
};

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);  // throws on overflow
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
/// Exact a^k if it fits below 2^63.
std::optional<u64> checked_pow(u64 a, u64 k);
bool is_prime(u64 n);

/// Trial division over a 2^16 sieve, Pollard-rho (Brent) above. 1 <= n <= 2^63.
Factorization factor(u64 n);
std::vector<u64> divisors(u64 n);
std::vector<u64> divisors(const Factorization& f);
u64 euler_phi(u64 n);
u64 carmichael(u64 n);

/// ord_n(a) for gcd(a, n) = 1, by exponent descent from the Carmichael bound.
u64 mult_ord(u64 n, u64 a);
/// ord_n(q); requires gcd(n, p) = 1. ord_1(q) = 1.
u64 mult_ord(u64 n, const FieldDesc& q);
/// O(n) reference scan, kept for cross-checking.
u64 mult_ord_naive(u64 n, u64 a);

/// nu_p(n), the exponent of the prime p in n >= 1.
unsigned nu(u64 p, u64 n);

/// nu_r(q^k - 1) for a prime r not dividing p, via modular arithmetic only.
/// Returns at most `cap` (the loop stops once r^cap divides q^k - 1).
unsigned nu_of_power_minus_one(u64 r, const FieldDesc& q, u64 k, unsigned cap);

enum class LteMode { CoprimeExponent, PrimePower };

struct LteReport {
    bool hypothesis_met = false;  // f = nu_r(N - 1) >= 1
    unsigned f = 0;
    u64 exponent = 0;             // e (coprime mode) or r (power mode)
    unsigned valuation = 0;       // nu_r(N^exponent - 1)
    unsigned predicted = 0;       // f, f + 1 or the lower bound f + 2
    bool lower_bound_only = false;
    bool holds = false;
};

/// Checks the lifting-the-exponent relations for N and prime r.
/// In CoprimeExponent mode `e` must not be divisible by r; it is ignored in
/// PrimePower mode (the exponent is r).
LteReport lte_check(u64 r, u64 N, LteMode mode, u64 e = 1);

/// {r in pi(n') : nu_r(n') = nu_r(q^{m'} - 1)} with m' = ord_{n'}(q).
std::vector<u64> star_prime_set(u64 nprime, const FieldDesc& q);

/// ord_{n}(q) == (n / n') * ord_{n'}(q), by direct order computation.
bool equally_spaced_direct(u64 n, u64 nprime, const FieldDesc& q);
/// The same predicate through the prime-set characterization.
bool equally_spaced_criterion(u64 n, u64 nprime, const FieldDesc& q);
/// Direct route, asserted against the criterion in debug builds.
bool equally_spaced_ok(u64 n, u64 nprime, const FieldDesc& q);

void require_coprime(u64 n, const FieldDesc& q);

}  // namespace nsic::nt
