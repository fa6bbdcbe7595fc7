#pragma once

// Weight predicates on C(q, m, u) and the two-weight audit of non-standard
// codes.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsic/classifier.hpp"
#include "nsic/cycliccode.hpp"

namespace nsic::sw {

using nt::FieldDesc;
using nt::u64;

/// C(q, m, u): the trace code of length n = (q^m - 1)/u. Only the
/// non-degenerate case ord_n(q) = m is admitted.
struct CqmuCode {
    FieldDesc q;
    u64 m = 1;
    u64 u = 1;
    u64 n = 1;

    u64 delta() const;  // (q^m - 1)/(q - 1)
    code::TraceCode trace_code() const;
    std::string to_string() const;
};

CqmuCode make_code(const FieldDesc& q, u64 m, u64 u);
CqmuCode code_of_pair(u64 n, const FieldDesc& q);

u64 u_delta(const FieldDesc& q, u64 m, u64 u);

/// Sorted distinct nonzero weights, from a per-field table of trace zeros.
std::vector<u64> weights(const CqmuCode& c, u64 budget = u64{1} << 20);

/// u_delta == 1; with `debug` the weight set is enumerated and compared.
bool is_one_weight(const CqmuCode& c, bool debug = false);

struct TwoWeight {
    bool two_weight = false;
    std::vector<u64> weights;
};
TwoWeight is_two_weight(const CqmuCode& c, u64 budget = u64{1} << 20);

struct Semiprimitive {
    bool semiprimitive = false;
    u64 u_delta = 1;
    std::optional<u64> j;  // p^j = -1 mod u_delta
};
Semiprimitive semiprimitive(const FieldDesc& q, u64 m, u64 u);
bool is_semiprimitive(const FieldDesc& q, u64 m, u64 u);

/// U * F_q^* with zero adjoined is a subfield of F_{q^m}.
bool is_subfield_code(const CqmuCode& c);

/// (11, 3) and (22, 3).
bool is_exception(u64 n, const FieldDesc& q);

struct AuditRow {
    u64 n = 0;
    FieldDesc q;
    u64 m = 1;
    u64 u = 1;
    cls::Verdict verdict = cls::Verdict::NonStandard;
    std::vector<u64> weights;
    bool semiprimitive = false;
    std::optional<u64> witness_j;
    bool subfield = false;
    bool exception = false;
    std::string status;  // pass | exempt | violation | skipped
    std::vector<cls::Kind> bases;

    std::string csv_row() const;
    nlohmann::json to_json() const;
};

struct Audit {
    std::vector<AuditRow> rows;
    std::vector<AuditRow> violations;
    u64 two_weight = 0;
    u64 skipped = 0;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

inline const char* kAuditHeader = "n,p,e,m,u,verdict,weights,semiprimitive,subfield,exception,status";

/// Every NonStandard pair (n, q) with q^m <= qm_limit and q in `fields`
/// (all prime powers up to sqrt(qm_limit) when empty).
Audit sw_audit(u64 qm_limit, const std::vector<FieldDesc>& fields = {}, unsigned threads = 0,
               u64 budget = u64{1} << 20);

/// Outcome of one iff-sweep over a parameter grid.
struct LemmaSweep {
    std::string name;
    u64 instances = 0;
    u64 two_weight = 0;
    u64 mismatches = 0;
    u64 side_failures = 0;       // implied one-weight or semiprimitive property missing
    u64 not_semiprimitive = 0;   // two-weight instances that are not semiprimitive
    std::vector<std::string> failures;

    bool ok() const { return mismatches == 0 && side_failures == 0; }
    nlohmann::json to_json() const;
};

struct LemmaCase {
    bool lhs = false;
    bool rhs = false;
    bool side_ok = true;
    bool semiprimitive_ok = true;  // lhs implies semiprimitive
};
/// Two weights of C(q^t, m, (q^{mt}-1)/n) against the arithmetic condition;
/// gcd(m, t) = 1 and min(m, t) >= 2.
LemmaCase verify_lift(const FieldDesc& q, u64 n, u64 t);
/// Two weights of C(q, m, u) against one weight of C(q, m0, u0) and r = 2,
/// for n = n0 r with ord_n(q) = r ord_n0(q).
LemmaCase verify_spaced(const FieldDesc& q, u64 n, u64 n0);
/// Two weights of C(q, mt, (q^{mt}-1)/lcm(n, s)) against its two arithmetic
/// cases; m = ord_n(q), t = ord_s(q) coprime and both > 1.
LemmaCase verify_product(const FieldDesc& q, u64 n, u64 s);

/// Grids cover every admissible instance whose largest field has at most
/// `limit` elements.
LemmaSweep sweep_lift(u64 limit);
LemmaSweep sweep_spaced(u64 limit);
LemmaSweep sweep_product(u64 limit);

/// Prime powers q (as (p, e)) with q <= bound, increasing.
std::vector<FieldDesc> prime_powers_up_to(u64 bound);

}  // namespace nsic::sw
