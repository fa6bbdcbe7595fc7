// Command-line front end: one subcommand per module.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsic/agree.hpp"
#include "nsic/classifier.hpp"
#include "nsic/cycliccode.hpp"
#include "nsic/density.hpp"
#include "nsic/error.hpp"
#include "nsic/oracle.hpp"
#include "nsic/schmidtwhite.hpp"

using namespace nsic;
using nt::FieldDesc;
using nt::u64;

namespace {

enum Exit { kOk = 0, kDisagree = 1, kInvalid = 2, kInfeasible = 3 };

struct Config {
    u64 n = 0, p = 0, e = 1;
    std::string N = "1000";
    std::string exps = "1-6";
    std::string fields;
    u64 limit = 0;
    u64 budget_nodes = 100'000'000;
    u64 budget_lrs = 10'000'000;
    u64 budget_field = u64{1} << 20;
    std::string format;
    std::string out;
    unsigned threads = 0;
    bool exhaustive = false;
    bool matrices = false;
    bool exact = false;
    bool lemmas = false;
    unsigned digits = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

u64 parse_u64(const std::string& s) {
    std::size_t used = 0;
    u64 v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a number: " + s);
    }
    if (used != s.size()) throw InvalidInput("not a number: " + s);
    return v;
}

// "1-6" or "1,2,5" or a mix.
std::vector<u64> parse_list(const std::string& s) {
    std::vector<u64> out;
    for (const auto& part : split(s, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(parse_u64(part));
            continue;
        }
        const u64 lo = parse_u64(part.substr(0, dash)), hi = parse_u64(part.substr(dash + 1));
        if (lo > hi) throw InvalidInput("empty range " + part);
        for (u64 v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

FieldDesc field_of_value(u64 q) {
    const auto f = nt::factor(q);
    if (f.factors.size() != 1) throw InvalidInput(std::to_string(q) + " is not a prime power");
    return {f.factors[0].prime, f.factors[0].exponent};
}

std::vector<FieldDesc> parse_fields(const std::string& s) {
    std::vector<FieldDesc> out;
    for (u64 q : parse_list(s)) out.push_back(field_of_value(q));
    return out;
}

FieldDesc pair_field(const Config& c) {
    if (c.p == 0) throw InvalidInput("missing p");
    if (!nt::is_prime(c.p)) throw InvalidInput("p = " + std::to_string(c.p) + " is not prime");
    if (c.e == 0) throw InvalidInput("e must be positive");
    return {c.p, c.e};
}

void require_n(const Config& c) {
    if (c.n == 0) throw InvalidInput("missing n");
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + c.out);
    f << text;
}

std::string render(const nlohmann::json& body) {
    nlohmann::json j = body;
    j["schema"] = "nsic/1";
    return j.dump(2) + "\n";
}

bool want_json(const Config& c, const char* fallback) {
    const std::string f = c.format.empty() ? fallback : c.format;
    return f == "json";
}

int cmd_classify(const Config& c) {
    require_n(c);
    const auto q = pair_field(c);
    cls::Classifier cl;
    const auto pc = cl.classify(c.n, q);
    if (want_json(c, "json")) {
        auto j = pc.to_json();
        if (c.exhaustive) {
            j["all_derivations"] = nlohmann::json::array();
            for (const auto& d : cl.all_derivations(c.n, q)) j["all_derivations"].push_back(d->to_json());
        }
        emit(c, render(j));
    } else {
        std::string s = "n,p,e,m,verdict,depth\n" + pc.csv_row() + "\n";
        emit(c, s);
    }
    return kOk;
}

int cmd_oracle(const Config& c) {
    require_n(c);
    oracle::StabilizerOptions o;
    o.mode = c.exact ? oracle::Mode::Exact : oracle::Mode::Decide;
    if (c.matrices) o.mode = oracle::Mode::Exact;
    o.matrices = c.matrices;
    o.budget = {c.budget_nodes, c.budget_field};
    const auto r = oracle::linear_stabilizer(c.n, pair_field(c), o);
    if (want_json(c, "json")) {
        emit(c, render(r.to_json(c.matrices)));
    } else {
        const auto j = r.to_json();
        std::ostringstream s;
        s << "n,p,e,m,verdict,order,standard_order,nodes\n"
          << c.n << "," << c.p << "," << c.e << "," << r.m << "," << j["verdict"].get<std::string>() << ","
          << (j["order"].is_null() ? "" : j["order"].dump()) << "," << j["standard_order"].dump() << "," << r.nodes
          << "\n";
        emit(c, s.str());
    }
    return r.status == oracle::Status::Ok ? kOk : kInfeasible;
}

int cmd_lrs(const Config& c) {
    require_n(c);
    const auto q = pair_field(c);
    const auto r = oracle::lrs_witness(c.n, q, {c.budget_lrs, c.budget_field});
    auto j = r.to_json();
    if (r.witness) j["verified"] = oracle::verify_lrs(c.n, q, *r.witness);
    emit(c, render(j));
    return r.status == oracle::Status::Ok ? kOk : kInfeasible;
}

int cmd_weights(const Config& c) {
    require_n(c);
    const auto tc = code::irreducible_code_of_pair(c.n, pair_field(c), c.budget_field);
    const auto wd = code::weight_distribution(tc);
    if (want_json(c, "json")) {
        emit(c, render(wd.to_json()));
    } else {
        emit(c, wd.to_csv());
    }
    return kOk;
}

int cmd_swaudit(const Config& c) {
    const u64 limit = c.limit ? c.limit : u64{1} << 18;
    std::vector<FieldDesc> fields;
    if (!c.fields.empty()) fields = parse_fields(c.fields);
    if (c.p) fields.push_back(pair_field(c));
    const auto audit = sw::sw_audit(limit, fields, c.threads, c.budget_field);
    std::vector<sw::LemmaSweep> sweeps;
    if (c.lemmas) sweeps = {sw::sweep_lift(limit), sw::sweep_spaced(limit), sw::sweep_product(limit)};
    bool sweeps_ok = true;
    for (const auto& s : sweeps) sweeps_ok = sweeps_ok && s.ok();
    if (want_json(c, "csv")) {
        auto j = audit.to_json();
        if (c.lemmas) {
            j["sweeps"] = nlohmann::json::array();
            for (const auto& s : sweeps) j["sweeps"].push_back(s.to_json());
        }
        emit(c, render(j));
    } else {
        emit(c, audit.to_csv());
        for (const auto& s : sweeps) {
            std::cerr << s.name << ": " << s.instances << " instances, " << s.mismatches << " mismatches, "
                      << s.side_failures << " side failures\n";
            for (const auto& f : s.failures) std::cerr << "  " << f << "\n";
        }
    }
    if (audit.skipped) return kInfeasible;
    return audit.violations.empty() && sweeps_ok ? kOk : kDisagree;
}

int cmd_density(const Config& c) {
    const u64 p = c.p ? c.p : 2;
    if (!nt::is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    const auto exps = parse_list(c.exps);
    const auto Ns = parse_list(c.N);
    for (u64 v : exps) {
        if (v == 0) throw InvalidInput("exponents must be positive");
    }
    for (u64 v : Ns) {
        if (v == 0) throw InvalidInput("N must be positive");
    }
    const auto t = density::density_table(p, exps, Ns, c.threads);
    const unsigned digits = c.digits ? c.digits : 4;
    const std::string f = c.format.empty() ? "csv" : c.format;
    if (f == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& byN : t.rows) {
            for (const auto& r : byN) {
                rows.push_back({{"p", r.p},
                                {"i", r.i},
                                {"N", r.N},
                                {"numerator", r.numerator},
                                {"denominator", r.denominator},
                                {"ratio_decimal", r.decimal(digits)}});
            }
        }
        emit(c, render({{"rows", rows}}));
    } else if (f == "markdown") {
        emit(c, t.to_markdown(digits));
    } else {
        emit(c, t.to_csv(digits));
    }
    return kOk;
}

int cmd_degcheck(const Config& c) {
    const auto fields = parse_fields(c.fields.empty() ? "2,3,4,5,7" : c.fields);
    const u64 nmax = c.n ? c.n : 8;
    const auto specs = oracle::degenerate_specs(fields, nmax);
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream csv;
    csv << "n,p,e,h,nprime,k,paut,formula,formula_holds,within_affine,listed_exception\n";
    u64 bad = 0;
    for (const auto& s : specs) {
        const auto r = oracle::degenerate_order_check(s);
        bad += !r.formula_holds || r.within_affine != r.listed_exception;
        rows.push_back(r.to_json());
        csv << s.n << "," << s.q.p << "," << s.q.e << "," << s.h.to_string() << "," << r.nprime << "," << r.k << ","
            << r.paut << "," << r.formula << "," << (r.formula_holds ? "true" : "false") << ","
            << (r.within_affine ? "true" : "false") << "," << (r.listed_exception ? "true" : "false") << "\n";
    }
    if (want_json(c, "csv")) {
        emit(c, render({{"rows", rows}, {"failures", bad}}));
    } else {
        emit(c, csv.str());
    }
    return bad ? kDisagree : kOk;
}

int cmd_agree(const Config& c) {
    const auto fields = parse_fields(c.fields.empty() ? "2,3,4,5" : c.fields);
    agree::Options o;
    o.qm_limit = c.limit ? c.limit : u64{1} << 16;
    o.nmax = c.n;
    o.oracle_budget = {c.budget_nodes, c.budget_field};
    o.lrs_budget = {c.budget_lrs, c.budget_field};
    o.threads = c.threads;
    const auto rep = agree::run(fields, o);
    if (want_json(c, "csv")) {
        emit(c, render(rep.to_json()));
    } else {
        emit(c, rep.to_csv());
    }
    std::cerr << "feasible " << rep.feasible << ", infeasible " << rep.infeasible << ", disagreements "
              << rep.disagreements << "\n";
    return rep.disagreements ? kDisagree : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-standard irreducible cyclic codes: classifier, oracles and audits"};
    app.require_subcommand(1);
    Config c;

    auto add_pair = [&](CLI::App* s) {
        s->add_option("n,--n", c.n, "length");
        s->add_option("p,--p", c.p, "characteristic");
        s->add_option("e,--e", c.e, "q = p^e (default e = 1)");
    };
    auto add_common = [&](CLI::App* s) {
        s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json", "markdown"}));
        s->add_option("--out", c.out, "output file (stdout when omitted)");
        s->add_option("--threads", c.threads, "worker count (NSIC_THREADS otherwise)");
        s->add_option("--budget-nodes", c.budget_nodes, "search node budget for the stabilizer oracle")
            ->check(CLI::PositiveNumber);
        s->add_option("--budget-lrs", c.budget_lrs, "search node budget for the recurrence witness")
            ->check(CLI::PositiveNumber);
        s->add_option("--budget-field", c.budget_field, "largest field size realized")->check(CLI::PositiveNumber);
    };

    auto* classify = app.add_subcommand("classify", "classify a pair (n, p^e)");
    add_pair(classify);
    add_common(classify);
    classify->add_flag("--exhaustive", c.exhaustive, "list every derivation");

    auto* orc = app.add_subcommand("oracle", "linear stabilizer of U_n");
    add_pair(orc);
    add_common(orc);
    orc->add_flag("--exact", c.exact, "full order instead of a decision");
    orc->add_flag("--matrices", c.matrices, "include generator matrices (implies --exact)");

    auto* lrs = app.add_subcommand("lrs", "non-cyclic recurrence arrangement of U_n");
    add_pair(lrs);
    add_common(lrs);

    auto* weights = app.add_subcommand("weights", "weight distribution of the irreducible code");
    add_pair(weights);
    add_common(weights);

    auto* audit = app.add_subcommand("sw-audit", "two-weight audit of non-standard pairs");
    add_common(audit);
    audit->add_option("--p", c.p, "restrict to p^e");
    audit->add_option("--e", c.e, "restrict to p^e");
    audit->add_option("--fields", c.fields, "restrict to these q, e.g. 2,3,4");
    audit->add_option("--limit", c.limit, "bound on q^m (default 2^18)");
    audit->add_flag("--lemmas", c.lemmas, "also run the iff sweeps");

    auto* dens = app.add_subcommand("density", "non-standard density table");
    add_common(dens);
    dens->add_option("--p", c.p, "prime (default 2)");
    dens->add_option("--exps", c.exps, "exponents, e.g. 1-6");
    dens->add_option("--N", c.N, "bounds, e.g. 1000,10000");
    dens->add_option("--digits", c.digits, "decimal places (default 4)");

    auto* deg = app.add_subcommand("deg-check", "automorphism orders of degenerate codes");
    add_common(deg);
    deg->add_option("--n", c.n, "largest length (default 8)");
    deg->add_option("--fields", c.fields, "q values (default 2,3,4,5,7)");

    auto* agr = app.add_subcommand("agree", "classifier / oracle / recurrence agreement");
    add_common(agr);
    agr->add_option("--fields", c.fields, "q values (default 2,3,4,5)");
    agr->add_option("--n", c.n, "largest length");
    agr->add_option("--limit", c.limit, "bound on q^m (default 2^16)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*classify) return cmd_classify(c);
        if (*orc) return cmd_oracle(c);
        if (*lrs) return cmd_lrs(c);
        if (*weights) return cmd_weights(c);
        if (*audit) return cmd_swaudit(c);
        if (*dens) return cmd_density(c);
        if (*deg) return cmd_degcheck(c);
        if (*agr) return cmd_agree(c);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const BudgetExceeded& e) {
        std::cerr << "oracle-infeasible: " << e.what() << "\n";
        return kInfeasible;
    }
    return kOk;
}
