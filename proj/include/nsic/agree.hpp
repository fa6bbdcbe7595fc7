#pragma once

// Three-way comparison of the classifier, the stabilizer oracle and the
// linear-recurrence witness search.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsic/oracle.hpp"

namespace nsic::agree {

using nt::FieldDesc;
using nt::u64;

struct Row {
    u64 n = 1;
    FieldDesc q;
    u64 m = 1;
    bool classifier = false;       // NonStandard
    std::optional<bool> oracle;    // |L| > n m, unset when infeasible
    std::optional<bool> lrs;       // witness found, unset when infeasible
    u64 oracle_nodes = 0;
    u64 lrs_nodes = 0;
    double millis = 0;

    bool feasible() const { return oracle.has_value() && lrs.has_value(); }
    bool agrees() const { return !feasible() || (*oracle == classifier && *lrs == classifier); }
    /// agree | disagree | infeasible
    std::string status() const;
    std::string csv_row() const;
    nlohmann::json to_json() const;
};

struct Report {
    std::vector<Row> rows;
    u64 feasible = 0;
    u64 infeasible = 0;
    u64 disagreements = 0;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

inline const char* kAgreeHeader = "n,p,e,m,classifier,oracle,lrs,status";

struct Options {
    u64 qm_limit = u64{1} << 16;  // pairs with q^m above this are not listed
    u64 nmax = 0;                 // 0: no bound beyond qm_limit
    oracle::Budget oracle_budget{100'000'000, u64{1} << 20};
    oracle::Budget lrs_budget{10'000'000, u64{1} << 20};
    unsigned threads = 0;
};

Row compare(u64 n, const FieldDesc& q, const Options& opt);
/// Every n coprime to p with q^{ord_n(q)} <= qm_limit, for each q.
Report run(const std::vector<FieldDesc>& qs, const Options& opt);

}  // namespace nsic::agree
