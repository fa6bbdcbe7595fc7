#pragma once

// Proportion of non-standard pairs (n, p^i) among lengths n <= N coprime to p.

#include <string>
#include <vector>

#include "nsic/classifier.hpp"

namespace nsic::density {

using nt::u64;

struct DensityRow {
    u64 p = 2;
    u64 i = 1;
    u64 N = 1;
    u64 numerator = 0;
    u64 denominator = 0;

    /// numerator / denominator rounded half-to-even to `digits` decimals.
    std::string decimal(unsigned digits) const;
    double ratio() const;
};

/// Rounds num/den half-to-even to `digits` decimals and renders it.
std::string round_half_even(u64 num, u64 den, unsigned digits);

/// NSIC_THREADS when set, else the hardware concurrency; `requested` wins
/// when nonzero.
unsigned worker_count(unsigned requested = 0);

/// Classifies every n in [1, N] with gcd(n, p) = 1. When `verdicts` is given it
/// receives, for each such n in increasing order, the PairClass.
DensityRow density(u64 p, u64 i, u64 N, unsigned threads = 0, std::vector<cls::PairClass>* verdicts = nullptr);

struct DensityTable {
    u64 p = 2;
    std::vector<u64> exps;
    std::vector<u64> Ns;
    std::vector<std::vector<DensityRow>> rows;  // rows[exp index][N index]

    /// p,i,N,numerator,denominator,ratio_decimal
    std::string to_csv(unsigned digits) const;
    /// One row per exponent, one column per N.
    std::string to_markdown(unsigned digits) const;
};

DensityTable density_table(u64 p, const std::vector<u64>& exps, const std::vector<u64>& Ns, unsigned threads = 0);

}  // namespace nsic::density
