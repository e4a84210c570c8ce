#include "revmix/excursion.hpp"

#include <cmath>

#include "revmix/errors.hpp"
#include "revmix/rng.hpp"

namespace revmix {

ExcursionDecomposition decompose(std::span<const std::int8_t> traj) {
    ExcursionDecomposition out;
    bool have_prev_zero = false;
    std::int64_t since = 0;  // signed sum since the previous zero
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::int8_t s = traj[k];
        if (k > 0) {
            std::int8_t prev = traj[k - 1];
            if ((prev == -1 && s == 1) || (prev == 1 && s == -1))
                throw ForbiddenTransition("adjacent opposite-sign states at index " +
                                          std::to_string(k));
        }
        if (s == 0) {
            if (have_prev_zero) out.w_sums.push_back(since);
            out.kappa.push_back(static_cast<std::int64_t>(k));
            have_prev_zero = true;
            since = 0;
        } else {
            since += s;
        }
    }
    if (out.kappa.size() < 2)
        throw NoReturn("trajectory contains fewer than 2 visits to state 0");
    return out;
}

std::int64_t block_length(const BlockParams& p) {
    // +1e-9 absorbs the 1-ulp error when 1/(theta_star*eps) is an exact
    // integer for rational parameters (e.g. eps = theta = 1/9 gives 72).
    double v = 1.0 / (p.theta_star * p.epsilon);
    if (v > 9.0e18) throw InvalidParams("block_length: exceeds 64-bit integer range");
    return static_cast<std::int64_t>(std::floor(v + 1e-9));
}

WLawResult w_law_distance(const BlockParams& p, std::int64_t harvest, std::uint64_t seed) {
    if (harvest < 1) throw InvalidParams("w_law_distance: harvest must be >= 1");
    WLawResult res;
    Rng rng(seed);
    const double a = p.theta_star * p.epsilon;

    // Start at a visit to state 0 (the excursion sums are independent of the
    // position of that first visit), then walk the chain directly.
    std::int8_t s = 0;
    std::int64_t since = 0;
    while (res.harvested < harvest) {
        double u = rng.uniform();
        if (s == 0) {
            s = u < a / 2.0 ? std::int8_t{-1} : (u < a ? std::int8_t{1} : std::int8_t{0});
        } else if (u < p.theta) {
            s = 0;
        }
        if (s == 0) {
            res.counts[since] += 1;
            res.harvested += 1;
            since = 0;
        } else {
            since += s;
        }
    }

    int K = g_support_for_tail(a, p.theta);
    res.exact = g_pmf(a, p.theta, K);
    const double n = static_cast<double>(res.harvested);

    // TV over the union of the empirical support and [-K, K]; the exact mass
    // not covered by that union is added in full.
    double sum_abs = 0.0, covered = 0.0;
    auto exact_at = [&](std::int64_t k) {
        if (k == 0) return 1.0 - a;
        double ak = static_cast<double>(std::llabs(k));
        return (a / 2.0) * p.theta * std::pow(1.0 - p.theta, ak - 1.0);
    };
    for (std::int64_t k = -K; k <= K; ++k) {
        auto it = res.counts.find(k);
        double emp = it == res.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        double ex = exact_at(k);
        sum_abs += std::abs(emp - ex);
        covered += ex;
    }
    for (const auto& [k, c] : res.counts) {
        if (k >= -K && k <= K) continue;
        double ex = exact_at(k);
        sum_abs += std::abs(static_cast<double>(c) / n - ex);
        covered += ex;
    }
    res.tv_distance = 0.5 * (sum_abs + (1.0 - covered));
    return res;
}

CouplingResult coupling_discrepancy(const BlockParams& p, std::int64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw InvalidParams("coupling_discrepancy: trials must be >= 1");
    CouplingResult res;
    res.trials = trials;
    const std::int64_t I = block_length(p);
    const std::int64_t initial_len =
        std::max<std::int64_t>(4 * I + 16, I + 2);

    for (std::int64_t trial = 0; trial < trials; ++trial) {
        std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
        std::int64_t len = initial_len;
        bool done = false;
        for (int attempt = 0; attempt <= 3 && !done; ++attempt) {
            // Re-sampling with the same seed extends the previous path, so a
            // retry genuinely continues the same trajectory.
            auto path = sample_path(p, len + 1, trial_seed);

            std::int64_t zeros = 0, kappa_i = -1;
            for (std::size_t k = 0; k < path.size(); ++k) {
                if (path[k] == 0) {
                    if (zeros == I) {
                        kappa_i = static_cast<std::int64_t>(k);
                        break;
                    }
                    ++zeros;
                }
            }
            if (kappa_i < 0) {
                len *= 2;
                continue;
            }

            std::int64_t direct = 0;
            for (std::int64_t k = 1; k <= I; ++k) direct += path[static_cast<std::size_t>(k)];
            // sum of the first I excursion sums = sum of states over
            // (kappa_0, kappa_I]; the endpoints are zeros, so summing the
            // whole prefix (kappa_0, kappa_I] is the same thing
            std::int64_t kappa_0 = -1;
            for (std::size_t k = 0; k < path.size(); ++k)
                if (path[k] == 0) {
                    kappa_0 = static_cast<std::int64_t>(k);
                    break;
                }
            std::int64_t wsum = 0;
            for (std::int64_t k = kappa_0 + 1; k <= kappa_i; ++k)
                wsum += path[static_cast<std::size_t>(k)];
            if (direct != wsum) ++res.mismatches;
            done = true;
        }
        if (!done) {
            ++res.aborted;
            ++res.mismatches;  // never silently counted as agreement
        }
    }
    res.freq = static_cast<double>(res.mismatches) / static_cast<double>(trials);
    return res;
}

}  // namespace revmix
