#pragma once

// Standard / non-standard decision for pairs (n, q): membership in the closure
// of the base families under the reverse constructions, with a derivation
// tree as evidence.

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nsic/numtheory.hpp"

namespace nsic::cls {

using nt::FieldDesc;
using nt::u64;

enum class Kind { Repetition, FullGroup, Ovoid, Golay, EquallySpaced, Ext, Lift, Descend, Product };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);
bool is_base(Kind k);

/// One node of a derivation. Parameters by kind:
///   EquallySpaced: a = n', b = k
///   Ext: a = u      Lift: a = t      Descend: a = r
///   Product: a = n1, b = s
struct Derivation {
    u64 n = 1;
    FieldDesc q;
    Kind kind = Kind::Repetition;
    u64 a = 0;
    u64 b = 0;
    std::shared_ptr<const Derivation> child;

    int depth() const;
    nlohmann::json to_json() const;
    static std::shared_ptr<const Derivation> from_json(const nlohmann::json& j);
};

enum class Verdict { Standard, NonStandard };
std::string to_string(Verdict v);

struct PairClass {
    u64 n = 1;
    FieldDesc q;
    Verdict verdict = Verdict::Standard;
    std::shared_ptr<const Derivation> derivation;  // null when Standard
    u64 m = 1;
    u64 n0 = 1;
    u64 n1 = 1;

    bool nonstandard() const { return verdict == Verdict::NonStandard; }
    /// n,p,e,m,verdict,derivation-depth
    std::string csv_row() const;
    nlohmann::json to_json() const;
};

/// gcd(n, q - 1) without materializing q.
u64 gcd_q_minus_one(u64 n, const FieldDesc& q);

bool base_repetition(u64 n, const FieldDesc& q);
bool base_fullgroup(u64 n, const FieldDesc& q);
bool base_ovoid(u64 n, const FieldDesc& q);
bool base_golay(u64 n, const FieldDesc& q);
/// (n', k) with the smallest qualifying k, if any.
std::optional<std::pair<u64, u64>> base_equally_spaced(u64 n, const FieldDesc& q);

/// Every base family whose predicate holds at (n, q).
std::vector<Kind> matching_bases(u64 n, const FieldDesc& q);

class Classifier {
public:
    PairClass classify(u64 n, const FieldDesc& q);
    /// Every base that holds plus every reverse step with a non-standard child,
    /// each completed with the child's canonical derivation.
    std::vector<std::shared_ptr<const Derivation>> all_derivations(u64 n, const FieldDesc& q);
    std::size_t memo_size() const;
    void clear();

private:
    std::shared_ptr<const Derivation> search(u64 n, const FieldDesc& q);
    std::shared_ptr<const Derivation> lookup_or_search(u64 n, const FieldDesc& q);
    std::vector<std::shared_ptr<const Derivation>> candidates(u64 n, const FieldDesc& q, bool first_only);

    struct Key {
        u64 n, p, e;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::size_t h = std::hash<u64>{}(k.n);
            h ^= std::hash<u64>{}(k.p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<u64>{}(k.e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, std::shared_ptr<const Derivation>, KeyHash> memo_;
};

/// Process-wide classifier with a shared memo.
Classifier& default_classifier();
PairClass classify(u64 n, const FieldDesc& q);

/// Closed-form verdict for ord_n(q) = 2 from the three-case list.
PairClass classify_m2(u64 n, const FieldDesc& q);

/// Lexicographic (n, m, e) strictly decreases from parent to child; throws
/// std::logic_error otherwise.
void check_measure(u64 n, const FieldDesc& q, u64 child_n, const FieldDesc& child_q);

struct ReplayReport {
    bool ok = true;
    std::string error;
    int nodes = 0;
};
/// Re-checks every node of a derivation from first principles.
ReplayReport replay(const Derivation& d);

}  // namespace nsic::cls
