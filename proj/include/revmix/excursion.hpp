#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "revmix/block.hpp"
#include "revmix/limit_law.hpp"

namespace revmix {

// Return times to state 0 and the signed excursion sums between them.
// kappa enumerates {k >= 0 : X_k = 0} in increasing order; w_sums[m] is the
// sum of the states strictly between kappa[m] and kappa[m+1].
struct ExcursionDecomposition {
    std::vector<std::int64_t> kappa;
    std::vector<std::int64_t> w_sums;
};

ExcursionDecomposition decompose(std::span<const std::int8_t> traj);

// greatest integer <= 1/(theta_star * epsilon); always >= 72
std::int64_t block_length(const BlockParams& p);

struct WLawResult {
    double tv_distance = 0.0;
    std::int64_t harvested = 0;
    std::map<std::int64_t, std::int64_t> counts;
    IntegerPmf exact;  // g[theta_star*eps, theta]
};

// Harvests `harvest` excursion sums from a stationary path started at an
// occurrence of state 0 and returns the total-variation distance between
// their empirical law and g[theta_star*eps, theta].
WLawResult w_law_distance(const BlockParams& p, std::int64_t harvest, std::uint64_t seed);

struct CouplingResult {
    double freq = 0.0;        // empirical frequency of sum mismatch
    std::int64_t mismatches = 0;
    std::int64_t aborted = 0;  // trials that ran out of path after all retries
    std::int64_t trials = 0;
};

// For each trial, simulates a stationary path long enough to contain the
// I-th return to 0, then compares sum_{k=1..I} X_k against the sum of the
// first I excursion sums of the same path.  Paths start at length ~4I and
// are doubled on PathTooShort up to 3 times; a trial that still ends short
// is counted in `aborted` and, conservatively, as a mismatch.
CouplingResult coupling_discrepancy(const BlockParams& p, std::int64_t trials,
                                    std::uint64_t seed);

}  // namespace revmix
