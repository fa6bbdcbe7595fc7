#include "nsic/density.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "nsic/error.hpp"

namespace nsic::density {

std::string round_half_even(u64 num, u64 den, unsigned digits) {
    if (den == 0) throw InvalidInput("zero denominator");
    nt::u128 scale = 1;
    for (unsigned d = 0; d < digits; ++d) scale *= 10;
    const nt::u128 scaled = static_cast<nt::u128>(num) * scale;
    nt::u128 q = scaled / den;
    const nt::u128 r = scaled % den;
    if (2 * r > den || (2 * r == den && (q & 1))) ++q;
    const nt::u128 whole = q / scale;
    nt::u128 frac = q % scale;
    std::string digits_str(digits, '0');
    for (unsigned d = digits; d-- > 0;) {
        digits_str[d] = static_cast<char>('0' + static_cast<int>(frac % 10));
        frac /= 10;
    }
    std::string out = std::to_string(static_cast<u64>(whole));
    if (digits) out += "." + digits_str;
    return out;
}

std::string DensityRow::decimal(unsigned digits) const { return round_half_even(numerator, denominator, digits); }

double DensityRow::ratio() const {
    return denominator ? static_cast<double>(numerator) / static_cast<double>(denominator) : 0.0;
}

unsigned worker_count(unsigned requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("NSIC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

DensityRow density(u64 p, u64 i, u64 N, unsigned threads, std::vector<cls::PairClass>* verdicts) {
    if (!nt::is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    if (i == 0 || N == 0) throw InvalidInput("density needs i >= 1 and N >= 1");
    const nt::FieldDesc q(p, i);
    std::vector<u64> lengths;
    for (u64 n = 1; n <= N; ++n) {
        if (n % p) lengths.push_back(n);
    }
    std::vector<cls::PairClass> results(lengths.size());
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    auto worker = [&] {
        for (;;) {
            const std::size_t start = next.fetch_add(kChunk);
            if (start >= lengths.size()) return;
            const std::size_t stop = std::min(lengths.size(), start + kChunk);
            for (std::size_t j = start; j < stop; ++j) results[j] = cls::classify(lengths[j], q);
        }
    };
    const unsigned nthreads = std::min<unsigned>(worker_count(threads), static_cast<unsigned>(lengths.size() / kChunk + 1));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    DensityRow row{p, i, N, 0, lengths.size()};
    for (const auto& r : results) row.numerator += r.nonstandard();
    if (verdicts) *verdicts = std::move(results);
    return row;
}

std::string DensityTable::to_csv(unsigned digits) const {
    std::ostringstream os;
    os << "p,i,N,numerator,denominator,ratio_decimal\n";
    for (const auto& per_exp : rows) {
        for (const auto& r : per_exp) {
            os << r.p << ',' << r.i << ',' << r.N << ',' << r.numerator << ',' << r.denominator << ','
               << r.decimal(digits) << '\n';
        }
    }
    return os.str();
}

std::string DensityTable::to_markdown(unsigned digits) const {
    std::ostringstream os;
    os << "| N |";
    for (u64 N : Ns) os << ' ' << N << " |";
    os << "\n|---|";
    for (std::size_t j = 0; j < Ns.size(); ++j) os << "---|";
    os << '\n';
    for (std::size_t e = 0; e < exps.size(); ++e) {
        os << "| R_" << p << '^' << exps[e] << "(N) |";
        for (const auto& r : rows[e]) os << ' ' << r.decimal(digits) << " |";
        os << '\n';
    }
    return os.str();
}

DensityTable density_table(u64 p, const std::vector<u64>& exps, const std::vector<u64>& Ns, unsigned threads) {
    DensityTable t;
    t.p = p;
    t.exps = exps;
    t.Ns = Ns;
    for (u64 i : exps) {
        std::vector<DensityRow> per_exp;
        for (u64 N : Ns) per_exp.push_back(density(p, i, N, threads));
        t.rows.push_back(std::move(per_exp));
    }
    return t;
}

}  // namespace nsic::density
