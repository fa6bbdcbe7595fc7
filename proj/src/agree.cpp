#include "nsic/agree.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "nsic/classifier.hpp"
#include "nsic/density.hpp"

namespace nsic::agree {

namespace {

std::string verdict_text(const std::optional<bool>& v) {
    if (!v) return "infeasible";
    return *v ? "NonStandard" : "Standard";
}

}  // namespace

std::string Row::status() const {
    if (!feasible()) return "infeasible";
    return agrees() ? "agree" : "disagree";
}

std::string Row::csv_row() const {
    return std::to_string(n) + "," + std::to_string(q.p) + "," + std::to_string(q.e) + "," + std::to_string(m) + "," +
           verdict_text(classifier) + "," + verdict_text(oracle) + "," + verdict_text(lrs) + "," + status();
}

nlohmann::json Row::to_json() const {
    auto opt = [](const std::optional<bool>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"n", n},
            {"p", q.p},
            {"e", q.e},
            {"m", m},
            {"classifier_nonstandard", classifier},
            {"oracle_nonstandard", opt(oracle)},
            {"lrs_witness", opt(lrs)},
            {"oracle_nodes", oracle_nodes},
            {"lrs_nodes", lrs_nodes},
            {"status", status()}};
}

std::string Report::to_csv() const {
    std::string out = std::string(kAgreeHeader) + "\n";
    for (const auto& r : rows) out += r.csv_row() + "\n";
    return out;
}

nlohmann::json Report::to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) rs.push_back(r.to_json());
    return {{"feasible", feasible}, {"infeasible", infeasible}, {"disagreements", disagreements}, {"rows", rs}};
}

Row compare(u64 n, const FieldDesc& q, const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    Row row;
    row.n = n;
    row.q = q;
    const auto pc = cls::classify(n, q);
    row.m = pc.m;
    row.classifier = pc.nonstandard();

    oracle::StabilizerOptions so;
    so.mode = oracle::Mode::Decide;
    so.budget = opt.oracle_budget;
    const auto st = oracle::linear_stabilizer(n, q, so);
    row.oracle_nodes = st.nodes;
    if (st.status == oracle::Status::Ok) row.oracle = st.nonstandard;

    const auto lr = oracle::lrs_witness(n, q, opt.lrs_budget);
    row.lrs_nodes = lr.nodes;
    if (lr.status == oracle::Status::Ok) row.lrs = lr.witness.has_value();
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

Report run(const std::vector<FieldDesc>& qs, const Options& opt) {
    std::vector<std::pair<u64, FieldDesc>> pairs;
    for (const auto& q : qs) {
        const auto qv = q.value();
        if (!qv) continue;
        const u64 top = opt.nmax ? opt.nmax : opt.qm_limit;
        for (u64 n = 1; n <= top; ++n) {
            if (n % q.p == 0) continue;
            const auto size = nt::checked_pow(*qv, nt::mult_ord(n, q));
            if (size && *size <= opt.qm_limit) pairs.emplace_back(n, q);
        }
    }
    std::vector<Row> rows(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();) rows[i] = compare(pairs[i].first, pairs[i].second, opt);
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(density::worker_count(opt.threads), pairs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Report rep;
    for (auto& r : rows) {
        if (r.feasible()) {
            ++rep.feasible;
            rep.disagreements += !r.agrees();
        } else {
            ++rep.infeasible;
        }
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

}  // namespace nsic::agree
