#pragma once

// Cyclic codes C_{n,h,q} keyed by their check polynomial, and the trace
// representation c_alpha = (Tr(alpha beta^i))_{0 <= i < n}.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsic/gfield.hpp"
#include "nsic/numtheory.hpp"

namespace nsic::code {

using gf::Elem;
using gf::Poly;
using nt::FieldDesc;
using nt::u64;

inline constexpr u64 kEnumerationBudget = u64{1} << 20;

/// h has coefficients in the canonical F_q (ranks of build_field(p, e)).
struct CyclicCodeSpec {
    u64 n = 1;
    FieldDesc q;
    Poly h;

    /// Checks gcd(n, p) = 1 and h | x^n - 1; throws InvalidInput otherwise.
    void validate() const;
    u64 dim() const { return static_cast<u64>(h.degree()); }
    std::shared_ptr<const gf::ExtField> coefficient_field() const;
    /// (x^n - 1) / h.
    Poly generator_poly() const;
    /// c(x) h(x) == 0 mod x^n - 1.
    bool contains(const std::vector<Elem>& word) const;
    /// Rows x^i g(x), i < dim.
    std::vector<std::vector<Elem>> generator_rows() const;
    nlohmann::json to_json() const;
};

/// Least N with h | x^N - 1. h(0) must be nonzero.
u64 poly_order(const gf::ExtField& Fq, const Poly& h);

struct Degeneracy {
    bool degenerate = false;
    u64 nprime = 1;
    u64 k = 1;
};
Degeneracy is_degenerate(const CyclicCodeSpec& spec);

struct TraceCode {
    CyclicCodeSpec spec;
    std::shared_ptr<const gf::ExtField> bigfield;
    std::shared_ptr<const gf::SubfieldEmbedding> subfield;  // F_q inside bigfield
    Elem beta = 1;
    u64 mprime = 1;

    u64 codeword_count() const;
    /// Coordinates as ranks of the canonical F_q.
    std::vector<Elem> codeword(Elem alpha) const;
};

/// The non-degenerate irreducible code of length n over F_q, with beta the
/// canonical element of order n and h = min_poly(beta^{-1}).
TraceCode irreducible_code_of_pair(u64 n, const FieldDesc& q, u64 field_budget = gf::kArithmeticLimit);
/// Trace form of a spec whose h is irreducible (possibly degenerate); beta is
/// the inverse of the least-ranked root of h.
TraceCode trace_code_of_spec(const CyclicCodeSpec& spec, u64 field_budget = gf::kArithmeticLimit);

/// Calls f(alpha, word) for every alpha in F_{q^{m'}} in rank order.
void for_each_codeword(const TraceCode& tc, const std::function<void(Elem, const std::vector<Elem>&)>& f,
                       u64 budget = kEnumerationBudget);

struct WeightDistribution {
    u64 n = 0;
    u64 total = 0;
    std::map<u64, u64> counts;

    std::vector<u64> nonzero_weights() const;
    std::string to_csv() const;
    nlohmann::json to_json() const;
    bool operator==(const WeightDistribution&) const = default;
};

/// Via w(c_alpha) = n - #{x in <beta> : Tr(alpha x) = 0}, one pass over the
/// cosets of <beta>.
WeightDistribution weight_distribution(const TraceCode& tc, u64 budget = kEnumerationBudget);
/// Reference: materializes every codeword.
WeightDistribution weight_distribution_bruteforce(const TraceCode& tc, u64 budget = kEnumerationBudget);

/// Monic irreducible factors of x^n - 1 over F_q (canonical ranks), one per
/// q-cyclotomic coset, ordered by coset representative.
std::vector<Poly> cyclotomic_factors(u64 n, const FieldDesc& q);

}  // namespace nsic::code
