#pragma once

// Brute-force ground truth: the set-wise stabilizer L(n, q) of U_{n,q} in
// GL_m(q), non-cyclic linear recurring arrangements of U, and permutation
// automorphism groups of short cyclic codes.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsic/cycliccode.hpp"
#include "nsic/gfield.hpp"

namespace nsic::oracle {

using gf::Elem;
using nt::FieldDesc;
using nt::u64;

struct Budget {
    u64 nodes = 100'000'000;
    u64 field = u64{1} << 20;
};

enum class Mode {
    Exact,   // count all of L
    Decide,  // stop at the first element outside <sigma, psi>
};

enum class Status { Ok, Infeasible };
std::string to_string(Status s);

/// Row-major m x m matrix over F_q (canonical ranks); row i holds the
/// coordinates of g(xi^i) in the basis 1, xi, ..., xi^(m-1).
struct Matrix {
    u64 m = 0;
    std::vector<Elem> entries;
};

struct StabilizerResult {
    u64 n = 1;
    FieldDesc q;
    u64 m = 1;
    Status status = Status::Ok;
    std::string reason;
    bool exact = false;        // order is |L(n, q)|
    u64 order = 0;             // valid when exact
    u64 standard_order = 0;    // n m
    bool nonstandard = false;  // |L| > n m; valid when status is Ok
    /// Generators as permutations of exponents: g(xi^i) = xi^perm[i].
    std::vector<std::vector<u64>> generator_perms;
    std::vector<Matrix> generators;
    u64 nodes = 0;
    double millis = 0;

    nlohmann::json to_json(bool with_generators = false) const;
};

struct StabilizerOptions {
    Mode mode = Mode::Exact;
    Budget budget;
    /// Fix g(1) = 1 and multiply by n; false searches every g(1) in U.
    bool fix_identity = true;
    bool matrices = false;
};

StabilizerResult linear_stabilizer(u64 n, const FieldDesc& q, const StabilizerOptions& opt = {});

/// Order of the permutation group generated by `gens` on {0, ..., n-1}.
u64 permutation_group_order(u64 n, const std::vector<std::vector<u64>>& gens, u64 limit = 10'000'000);

struct LrsWitness {
    gf::Poly f;                    // over the canonical F_q
    std::vector<u64> arrangement;  // s_k = xi^arrangement[k]
    bool is_cyclic = false;
};

struct LrsResult {
    Status status = Status::Ok;
    std::string reason;
    std::optional<LrsWitness> witness;
    u64 nodes = 0;
    double millis = 0;

    nlohmann::json to_json() const;
};

/// First non-cyclic period-n arrangement of U (in rank order of the initial
/// window) satisfying the recurrence with characteristic polynomial
/// min_poly(xi) over F_q.
LrsResult lrs_witness(u64 n, const FieldDesc& q, const Budget& budget = {});

/// Independent check of a witness by explicit generation.
bool verify_lrs(u64 n, const FieldDesc& q, const LrsWitness& w);

/// |PAut(C)| by scanning S_n; n <= 8. When `elements` is given it receives
/// every automorphism as the image list of 0..n-1.
u64 perm_stabilizer(const code::CyclicCodeSpec& spec, std::vector<std::vector<u64>>* elements = nullptr);

/// pi(i) = t i + a (mod n) with gcd(t, n) = 1.
bool is_affine(const std::vector<u64>& perm);

struct DegenerateReport {
    code::CyclicCodeSpec spec;
    u64 nprime = 1;
    u64 k = 1;
    u64 paut = 0;
    u64 paut_base = 0;
    u64 formula = 0;  // (k!)^{n'} |PAut(C')|
    bool formula_holds = false;
    bool within_affine = false;  // PAut(C) inside AG(n)
    bool listed_exception = false;

    nlohmann::json to_json() const;
};

/// One of the four degenerate specs whose group stays inside AG(n).
bool is_listed_exception(const code::CyclicCodeSpec& spec);
DegenerateReport degenerate_order_check(const code::CyclicCodeSpec& spec);
/// Every degenerate spec (1 <= deg h < n, ord h < n) with n <= nmax over the
/// given fields.
std::vector<code::CyclicCodeSpec> degenerate_specs(const std::vector<FieldDesc>& qs, u64 nmax);

}  // namespace nsic::oracle
