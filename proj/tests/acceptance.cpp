// One PASS/FAIL line per acceptance criterion.
//
// Usage: nsic_acceptance [--properties PATH] [--known-deviations 1,2,7] [--only 4,5]
// Criteria named in --known-deviations still print FAIL when they fail, but do
// not make the exit status nonzero.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "nsic/agree.hpp"
#include "nsic/classifier.hpp"
#include "nsic/density.hpp"
#include "nsic/oracle.hpp"
#include "nsic/schmidtwhite.hpp"

using namespace nsic;
using nt::FieldDesc;
using nt::u64;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::set<int> parse_ids(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) {
        if (!part.empty()) out.insert(std::stoi(part));
    }
    return out;
}

// "0.4500" -> "0.45"
std::string trim_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

Outcome density_golden(u64 N, const std::vector<std::string>& expected, unsigned digits) {
    const auto t = density::density_table(2, {1, 2, 3, 4, 5, 6}, {N});
    Outcome o{true, ""};
    std::ostringstream got;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto s = trim_zeros(t.rows[i][0].decimal(digits));
        if (s != expected[i]) o.pass = false;
        got << (i ? " " : "") << "i=" << i + 1 << ":" << s << (s == expected[i] ? "" : "(want " + expected[i] + ")");
    }
    o.detail = got.str();
    return o;
}

Outcome criterion1() {
    return density_golden(1000, {"0.494", "0.294", "0.356", "0.282", "0.424", "0.208"}, 3);
}

Outcome criterion2() {
    return density_golden(10000, {"0.45", "0.2814", "0.3174", "0.2644", "0.3752", "0.1954"}, 4);
}

Outcome criterion3() {
    const std::vector<FieldDesc> qs = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3},
                                       {3, 2}, {11, 1}, {13, 1}, {2, 4}, {5, 2}, {3, 3}};
    agree::Options opt;
    opt.qm_limit = u64{1} << 16;
    opt.oracle_budget = {100'000'000, u64{1} << 20};
    opt.lrs_budget = {10'000'000, u64{1} << 20};
    const auto rep = agree::run(qs, opt);
    std::ostringstream d;
    d << "feasible=" << rep.feasible << " infeasible=" << rep.infeasible << " disagreements=" << rep.disagreements;
    for (const auto& r : rep.rows) {
        if (r.feasible() && !r.agrees()) d << " [" << r.csv_row() << "]";
    }
    return {rep.disagreements == 0 && rep.feasible >= 500, d.str()};
}

Outcome criterion4() {
    struct Pin {
        u64 n;
        FieldDesc q;
        u64 order;
    };
    const std::vector<Pin> pins = {{5, {2, 1}, 120}, {15, {2, 1}, 20160}, {7, {2, 1}, 168},
                                   {11, {3, 1}, 660}, {8, {3, 1}, 48},     {5, {2, 2}, 10}};
    Outcome o{true, ""};
    std::ostringstream d;
    for (const auto& pin : pins) {
        const auto a = oracle::linear_stabilizer(pin.n, pin.q);
        const auto b = oracle::linear_stabilizer(pin.n, pin.q);
        const bool ok = a.status == oracle::Status::Ok && a.order == pin.order && b.order == a.order;
        o.pass = o.pass && ok;
        d << "(" << pin.n << "," << pin.q.to_string() << ")=" << a.order << (ok ? " " : "(want " + std::to_string(pin.order) + ") ");
    }
    // (15, F_2): U is all of F_16^*, so L is GL_4(2).
    u64 gl = 1;
    for (u64 i = 0; i < 4; ++i) gl *= 16 - (u64{1} << i);
    o.pass = o.pass && gl == 20160;
    d << "GL_4(2)=" << gl;
    o.detail = d.str();
    return o;
}

// Which of the four affine shapes a spec has, or -1.
int affine_shape(const code::CyclicCodeSpec& s) {
    const auto Fq = s.coefficient_field();
    const gf::Poly x_minus_1({Fq->neg(1), 1});
    const bool odd = s.q.p != 2;
    if (s.n == 2 && odd && s.h == x_minus_1) return 0;
    if (s.n == 3 && s.q.p != 3 && s.h == x_minus_1) return 1;
    if (s.n == 4 && odd && s.h == gf::Poly({1, 1})) return 2;
    if (s.n == 4 && odd && s.h == gf::Poly({Fq->neg(1), 0, 1})) return 3;
    return -1;
}

Outcome criterion5() {
    const auto specs = oracle::degenerate_specs({{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}}, 8);
    u64 formula_bad = 0, affine_bad = 0;
    std::set<int> shapes;
    for (const auto& s : specs) {
        const auto r = oracle::degenerate_order_check(s);
        formula_bad += !r.formula_holds;
        const int shape = affine_shape(s);
        affine_bad += r.within_affine != (shape >= 0);
        if (r.within_affine && shape >= 0) shapes.insert(shape);
    }
    std::ostringstream d;
    d << "specs=" << specs.size() << " formula_failures=" << formula_bad << " affine_mismatches=" << affine_bad
      << " exception_shapes_seen=" << shapes.size();
    return {formula_bad == 0 && affine_bad == 0 && shapes.size() == 4 && !specs.empty(), d.str()};
}

Outcome criterion6() {
    u64 pairs = 0, mismatches = 0;
    std::ostringstream d;
    cls::Classifier cl;
    for (const auto& q : sw::prime_powers_up_to(32)) {
        for (u64 n = 1; n <= 10000; ++n) {
            if (n % q.p == 0 || nt::mult_ord(n, q) != 2) continue;
            ++pairs;
            const bool a = cl.classify(n, q).nonstandard();
            const bool b = cls::classify_m2(n, q).nonstandard();
            if (a != b) {
                ++mismatches;
                if (mismatches <= 5) d << "[" << n << "," << q.to_string() << "] ";
            }
        }
    }
    d << "pairs=" << pairs << " mismatches=" << mismatches;
    return {mismatches == 0 && pairs > 0, d.str()};
}

Outcome criterion7() {
    const u64 limit = u64{1} << 18;
    const auto audit = sw::sw_audit(limit);
    std::ostringstream d;
    d << "audit rows=" << audit.rows.size() << " two_weight=" << audit.two_weight
      << " violations=" << audit.violations.size() << " skipped=" << audit.skipped;
    bool ok = audit.violations.empty() && audit.skipped == 0;
    for (const auto& s : {sw::sweep_lift(limit), sw::sweep_spaced(limit), sw::sweep_product(limit)}) {
        d << "; " << s.name << " instances=" << s.instances << " mismatches=" << s.mismatches
          << " side_failures=" << s.side_failures;
        ok = ok && s.ok();
    }
    return {ok, d.str()};
}

Outcome criterion8(const std::string& properties) {
    if (properties.empty()) return {false, "no property binary given (--properties)"};
    const std::string cmd = "\"" + properties + "\" --minimal > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return {rc == 0, properties + " exit=" + std::to_string(rc)};
}

}  // namespace

int main(int argc, char** argv) {
    std::string properties;
    std::set<int> known, only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--properties" && i + 1 < argc) {
            properties = argv[++i];
        } else if (a == "--known-deviations" && i + 1 < argc) {
            known = parse_ids(argv[++i]);
        } else if (a == "--only" && i + 1 < argc) {
            only = parse_ids(argv[++i]);
        } else {
            std::cerr << "unknown argument " << a << "\n";
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"density table N=10^3", criterion1},
        {"density table N=10^4", criterion2},
        {"three-way agreement", criterion3},
        {"pinned stabilizer orders", criterion4},
        {"degenerate codes", criterion5},
        {"m=2 cross-check", criterion6},
        {"two-weight audit and iff sweeps", criterion7},
        {"property suites", [&] { return criterion8(properties); }},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "CRITERION " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
                  << o.detail << " (" << std::fixed << std::setprecision(1) << secs << "s)";
        if (!o.pass && known.count(id)) std::cout << " [known deviation]";
        std::cout << std::endl;
        if (!o.pass && !known.count(id)) ++unexpected;
    }
    return unexpected ? 1 : 0;
}
