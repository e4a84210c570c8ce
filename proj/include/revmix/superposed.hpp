#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "revmix/block.hpp"
#include "revmix/envelope.hpp"
#include "revmix/levels.hpp"
#include "revmix/limit_law.hpp"
#include "revmix/rng.hpp"

namespace revmix {

struct SuperposedConfig {
    std::vector<LevelParams> levels;  // j = 1..J
    std::uint64_t master_seed = 1;
    std::int64_t trials = 10000;
    std::int64_t path_length = 10000;

    void validate() const;  // levels pass validate_levels, J >= 2
    BlockParams block(std::size_t level_index) const;  // 0-based
};

struct SuperposedSample {
    std::vector<std::vector<std::int8_t>> level_paths;
    std::vector<double> combined;
};

// J independent block paths on per-level derived seeds, combined pointwise
// with the level scales.
SuperposedSample sample(const SuperposedConfig& config, std::int64_t length,
                        std::uint64_t seed);

// weighted sum of one per-level state vector; injective when successive
// scales grow by factors >= 3
double encode_state(std::span<const std::int8_t> y, std::span<const double> h);

// Exact characteristic function of sum_{k=1..window} X_k for one stationary
// block chain, by complex 3x3 transfer-matrix powers.  window must be an
// integer value representable exactly in a double (< 2^53).
std::complex<double> chain_sum_cf(const BlockParams& p, double window, double t);

// Distribution table (exact up to ~window*ulp CF noise, well below Monte
// Carlo resolution) of sum_{k=1..window} X_k, built by
// inverting the characteristic function on a lattice large enough that
// aliasing is negligible.  Used where per-excursion simulation would need
// millions of draws per trial.
class BlockSumTable {
  public:
    BlockSumTable(const BlockParams& p, double window);
    double sample(Rng& rng) const;
    double mass_at(std::int64_t value) const;
    std::int64_t support_half_width() const { return half_; }

  private:
    std::int64_t half_ = 0;
    std::vector<double> cdf_;  // over values [-half_, half_)
};

// Draws sum_{k=1..window} X_k for one stationary block chain by run-length
// (sojourn) simulation; cost is O(number of excursions in the window).
double sample_block_sum_runs(const BlockParams& p, double window, Rng& rng);

// Chooses between run-length simulation and an exact table per level and
// window; shared across trials.
class LevelSumSampler {
  public:
    LevelSumSampler(const BlockParams& p, double window);
    double draw(Rng& rng) const;
    bool tabled() const { return table_ != nullptr; }

  private:
    BlockParams bp_;
    double window_;
    std::shared_ptr<const BlockSumTable> table_;
};

struct BetaBoundRow {
    double n = 0.0;
    double beta_sum = 0.0;       // exact sum of per-level beta(n); 0 once underflowed
    double log_six_bound = 0.0;  // log of sum_j 6 eps_j exp(-theta_j n)
    double zeta = 0.0;           // exp(xi); may underflow to 0 in the report
    double xi = 0.0;             // log zeta, the working representation
};

struct BetaBoundReport {
    std::vector<BetaBoundRow> rows;  // subsampled for emission
    std::int64_t checked = 0;        // every n in [1, n_max] was verified
    double max_log_margin = 0.0;     // max over n of log_six_bound - xi (< 0)
};

// Verifies, for every n <= n_max: sum_j beta_j(n) <= sum_j 6 eps_j (1-theta_j)^n,
// the per-level envelope domination 6 eps_j exp(-theta_j n) <= e^-j exp(phi(n)),
// and the strict log-domain bound sum_j 6 eps_j exp(-theta_j n) < zeta_n.
// `xi` supplies log zeta_n, which stays representable long after zeta itself
// underflows.  Throws BoundViolation on any failure.
BetaBoundReport beta_bound_report(const std::vector<LevelParams>& levels,
                                  const Envelope& env,
                                  const std::function<double(std::int64_t)>& xi,
                                  std::int64_t n_max, std::size_t max_rows = 512);

struct DissipationRow {
    double n = 0.0;
    double max_window_prob = 0.0;
    double se = 0.0;
    std::int64_t trials = 0;
};

// Monte Carlo of the normalized partial sum S_n / sqrt(n); reports the
// maximum sliding-window probability (window width = `window`, centers on a
// 0.1 grid spanning the observed range).
std::vector<DissipationRow> dissipation_probe(const SuperposedConfig& config,
                                              std::span<const double> n_list,
                                              double window, std::int64_t trials,
                                              std::uint64_t seed);

// default probe windows: {4, I_1, I_2} clipped to the exactly samplable range
std::vector<double> default_dissipation_windows(const SuperposedConfig& config);

struct SublimitResult {
    int j = 0;
    bool full_chain = false;
    double distance = 0.0;     // sup over the grid of |ecf - p1sl cf|
    double normalizer = 0.0;   // b = h_j / theta_j
    std::int64_t trials = 0;
};

// Monte Carlo draws of (theta_j/h_j) * sum_{k=1..I_j} of the chain, either
// the full superposed chain or only level j's contribution, compared against
// the compound Poisson(1)-Laplace characteristic function.
SublimitResult sublimit_probe(const SuperposedConfig& config, int j,
                              std::span<const double> t_grid, std::int64_t trials,
                              std::uint64_t seed, bool full_chain);

// closed-form Var(S_n)/n of the superposed chain
double superposed_var_rate(const std::vector<LevelParams>& levels, double n);

// closed-form second moment of the lower-level contribution to the
// normalized sublimit sum at level j (index 1-based)
double sublimit_lower_second_moment(const std::vector<LevelParams>& levels, int j);

}  // namespace revmix
