#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "revmix/envelope.hpp"

namespace revmix {

struct ExperimentConfig {
    std::string rate_source = "stretched-exp";  // "stretched-exp", "poly-log", "file"
    double alpha = 0.5;                         // stretched-exp exponent
    std::string rates_file;                     // for rate_source == "file"
    std::int64_t horizon = 10000;
    int max_levels = -1;  // -1 = generate as many levels as binary64 allows
    std::uint64_t master_seed = 1;
    std::int64_t trials = 100000;
    std::vector<double> n_list;  // dissipation windows; empty = automatic
    double t_max = 5.0;
    double t_step = 0.1;
    std::string out_dir = "revmix-out";
    bool emit_svg = false;

    void validate() const;
    static ExperimentConfig from_json_file(const std::string& path);

    void apply_quick_profile();  // trials = 10^4, horizon = 10^3
    void apply_full_profile();   // trials = 10^5, horizon = 10^4

    // streaming access to zeta_1..zeta_horizon (may underflow at deep n)
    std::function<double(std::int64_t)> zeta_fn() const;

    // streaming access to log zeta_n; analytic for presets, so it stays
    // finite at horizons where zeta itself underflows
    std::function<double(std::int64_t)> xi_fn() const;
};

struct BlockRunResult {
    bool ok = true;
    std::vector<std::string> failures;
};

// Emits transition/joint matrices plus mixing, covariance, variance and
// excursion-law tables for one block chain, re-verifying every closed-form
// identity along the way.
BlockRunResult run_block(double epsilon, double theta, std::int64_t n_max,
                         const std::string& out_dir, std::uint64_t seed,
                         std::int64_t wlaw_harvest, std::ostream& log);

struct FullRunResult {
    bool ok = false;
    int achieved_levels = 0;
    std::string halt_note;
    // conclusions: finite moments / mean zero, mixing bound, dissipation
    // trend, sublimit convergence
    std::array<bool, 4> verdicts{};
    std::vector<std::string> notes;
};

// Orchestrates rates -> envelope -> levels -> mixing bound -> probes and
// writes the full CSV report set; deterministic per config.
FullRunResult run_full(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace revmix
