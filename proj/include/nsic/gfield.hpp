#pragma once

// Concrete finite fields F_{p^k} in a polynomial basis.
//
// Elements are identified with their rank: the coefficient vector (low to
// high) read as a base-p integer. Rank 0 is zero and rank 1 is one.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nsic/numtheory.hpp"

namespace nsic::gf {

using nt::u64;
using Elem = std::uint64_t;

inline constexpr u64 kLogTableLimit = u64{1} << 20;
inline constexpr u64 kArithmeticLimit = u64{1} << 24;

class ExtField;

/// Polynomial with coefficients in some ExtField (ranks), low to high,
/// trailing zeros trimmed. The zero polynomial has no coefficients.
struct Poly {
    std::vector<Elem> c;

    Poly() = default;
    explicit Poly(std::vector<Elem> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Elem lead() const { return c.empty() ? 0 : c.back(); }
    Elem operator[](std::size_t i) const { return i < c.size() ? c[i] : 0; }
    bool operator==(const Poly&) const = default;

    /// "c0,c1,...,cd"; the zero polynomial is "0".
    std::string to_string() const;
    static Poly parse(const std::string& s);
};

class ExtField {
public:
    /// Use build_field(); this constructor trusts that `modulus` is monic
    /// irreducible of degree k over F_p.
    ExtField(u64 p, unsigned k, std::vector<u64> modulus);

    u64 p() const { return p_; }
    unsigned k() const { return k_; }
    u64 size() const { return size_; }
    u64 group_order() const { return size_ - 1; }
    const std::vector<u64>& modulus() const { return modulus_; }
    bool has_log_table() const { return !log_.empty(); }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, u64 e) const;
    /// a^(p^t).
    Elem frobenius(Elem a, u64 t = 1) const;
    /// Image of an F_p scalar.
    Elem scalar(u64 c) const { return c % p_; }

    /// Least-ranked multiplicative generator.
    Elem generator() const { return generator_; }
    /// Discrete log base generator(); requires the log table and a != 0.
    u64 log(Elem a) const;
    Elem exp(u64 i) const;

    std::vector<u64> coeffs(Elem a) const;
    Elem from_coeffs(const std::vector<u64>& c) const;

    /// "p^k:modulus".
    std::string to_string() const;

private:
    Elem mul_poly(Elem a, Elem b) const;
    Elem add_digits(Elem a, Elem b) const;
    u64 order_poly(Elem a) const;
    void build_tables();

    u64 p_;
    unsigned k_;
    u64 size_;
    std::vector<u64> modulus_;
    Elem generator_ = 1;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> zech_;  // log(1 + g^i), or kNoLog when it is zero
    static constexpr std::uint32_t kNoLog = 0xffffffffu;
};

/// Light value wrapper with operators, mostly for tests and examples.
struct FieldElement {
    const ExtField* field = nullptr;
    Elem rank = 0;

    FieldElement operator+(const FieldElement& o) const { return {field, field->add(rank, o.rank)}; }
    FieldElement operator-(const FieldElement& o) const { return {field, field->sub(rank, o.rank)}; }
    FieldElement operator*(const FieldElement& o) const { return {field, field->mul(rank, o.rank)}; }
    FieldElement operator/(const FieldElement& o) const { return {field, field->div(rank, o.rank)}; }
    FieldElement pow(u64 e) const { return {field, field->pow(rank, e)}; }
    bool operator==(const FieldElement& o) const { return rank == o.rank; }
    std::vector<u64> coeffs() const { return field->coeffs(rank); }
};

/// Deterministic field with the lexicographically least monic irreducible
/// modulus of degree k having nonzero constant term. Cached per (p, k).
std::shared_ptr<const ExtField> build_field(u64 p, unsigned k);

bool is_irreducible_mod_p(const std::vector<u64>& f, u64 p);
std::vector<u64> canonical_modulus(u64 p, unsigned k);

u64 element_order(const ExtField& F, Elem a);
/// generator()^((p^k - 1) / n).
Elem find_element_of_order(const ExtField& F, u64 n);
/// sum_{i < k/d} a^(p^(d i)).
Elem rel_trace(const ExtField& F, Elem a, unsigned sub_degree);
/// Minimal polynomial of a over F_{p^d}; coefficients are ranks of F.
Poly min_poly(const ExtField& F, Elem a, unsigned sub_degree);

/// U_{n}: the order-n subgroup listed as [xi^0, ..., xi^(n-1)].
class SubgroupU {
public:
    SubgroupU(std::shared_ptr<const ExtField> F, u64 n);

    const ExtField& field() const { return *field_; }
    std::shared_ptr<const ExtField> field_ptr() const { return field_; }
    u64 n() const { return elems_.size(); }
    Elem xi() const { return n() > 1 ? elems_[1] : 1; }
    const std::vector<Elem>& elems() const { return elems_; }
    Elem operator[](u64 i) const { return elems_[i % elems_.size()]; }
    /// i with xi^i == a, if a lies in U.
    std::optional<u64> index_of(Elem a) const;
    bool contains(Elem a) const { return index_of(a).has_value(); }

private:
    std::shared_ptr<const ExtField> field_;
    std::vector<Elem> elems_;
    u64 cofactor_ = 1;
    std::unordered_map<Elem, u64> index_;
};

/// F_{p^d} inside F_{p^k} through the least-ranked root of the canonical
/// modulus of F_{p^d}.
class SubfieldEmbedding {
public:
    SubfieldEmbedding(std::shared_ptr<const ExtField> big, unsigned d);

    const ExtField& big() const { return *big_; }
    const ExtField& small() const { return *small_; }
    std::shared_ptr<const ExtField> small_ptr() const { return small_; }
    Elem to_big(Elem a) const { return to_big_.at(a); }
    /// Throws InvalidInput if b is not in the subfield.
    Elem to_small(Elem b) const;
    bool contains(Elem b) const { return to_small_.count(b) != 0; }
    Poly poly_to_small(const Poly& f) const;
    Poly poly_to_big(const Poly& f) const;

private:
    std::shared_ptr<const ExtField> big_;
    std::shared_ptr<const ExtField> small_;
    std::vector<Elem> to_big_;
    std::unordered_map<Elem, Elem> to_small_;
};

// Polynomial arithmetic over the coefficient field R.
Poly poly_add(const ExtField& R, const Poly& a, const Poly& b);
Poly poly_sub(const ExtField& R, const Poly& a, const Poly& b);
Poly poly_mul(const ExtField& R, const Poly& a, const Poly& b);
Poly poly_scale(const ExtField& R, const Poly& a, Elem s);
/// (quotient, remainder); b must be nonzero.
std::pair<Poly, Poly> poly_divmod(const ExtField& R, const Poly& a, const Poly& b);
Poly poly_mod(const ExtField& R, const Poly& a, const Poly& b);
Poly poly_gcd(const ExtField& R, Poly a, Poly b);  // monic
Poly poly_monic(const ExtField& R, const Poly& a);
Poly poly_powmod(const ExtField& R, const Poly& base, u64 e, const Poly& mod);
/// Evaluates f (coefficients in R) at x in R.
Elem poly_eval(const ExtField& R, const Poly& f, Elem x);
/// x^n - 1 over R.
Poly x_pow_minus_one(const ExtField& R, u64 n);
/// Reciprocal x^deg f(1/x), normalized to be monic.
Poly poly_reciprocal_monic(const ExtField& R, const Poly& f);

}  // namespace nsic::gf
