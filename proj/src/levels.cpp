#include "revmix/levels.hpp"

#include <cmath>
#include <limits>

#include "revmix/csv.hpp"
#include "revmix/errors.hpp"

namespace revmix {

namespace {

// below this log-eps, downstream quantities (B*theta/eps, h^2) approach
// double overflow; treat as underflow of the construction
constexpr double kLogEpsFloor = -660.0;

const double kNinth = 1.0 / 9.0;

[[noreturn]] void fail(int j, const std::string& what) {
    throw ValidationFailure("level " + std::to_string(j) + ": " + what);
}

void check(bool ok, int j, const std::string& what) {
    if (!ok) fail(j, what);
}

}  // namespace

LevelParams level_zero() {
    LevelParams l;
    l.j = 0;
    l.eps = kNinth;
    l.theta = kNinth;
    l.I = 1.0;
    l.h = 1.0;
    return l;
}

LevelParams next_level(std::span<const LevelParams> history, const Envelope& env) {
    if (history.empty() || history.front().j != 0)
        throw InvalidParams("next_level: history must start with the springboard level");
    const LevelParams& prev = history.back();
    const int j = prev.j + 1;

    LevelParams l;
    l.j = j;

    double sum = 0.0;
    for (const auto& u : history) sum += u.h * u.h * u.eps / u.theta;
    l.B = static_cast<double>(j) * sum;

    l.eps_star = std::min(
        {kNinth, prev.eps / 2.0, std::pow(9.0, -j) / prev.I,
         std::pow(2.0, -j) / (9.0 * prev.h * prev.h)});
    if (!(l.eps_star > 0.0))
        throw NumericalUnderflow("level " + std::to_string(j) + ": eps* underflows");

    const double D = std::log(l.eps_star);
    const double s = std::min({kNinth, prev.theta / 2.0, std::pow(2.0, -j) / l.B});
    Tangent tg = tangent_select(env, D, s);

    l.t = tg.t;
    l.line_slope = tg.slope;
    l.line_intercept = tg.intercept - static_cast<double>(j + 2);

    if (l.line_intercept < kLogEpsFloor)
        throw NumericalUnderflow("level " + std::to_string(j) +
                                 ": log eps = " + format_double(l.line_intercept) +
                                 " is below the binary64 working range");

    l.eps = std::exp(l.line_intercept);
    l.theta = -tg.slope;
    l.theta_star = l.theta / (1.0 - l.eps);
    l.I = std::floor(1.0 / (l.theta_star * l.eps) + 1e-9);
    l.h = std::max(3.0 * prev.h, std::sqrt(l.B * l.theta / l.eps));
    return l;
}

LevelGenResult generate_levels(const Envelope& env, int max_levels) {
    LevelGenResult res;
    std::vector<LevelParams> history{level_zero()};
    int target = max_levels < 0 ? std::numeric_limits<int>::max() : max_levels;
    while (static_cast<int>(res.levels.size()) < target) {
        try {
            LevelParams l = next_level(history, env);
            history.push_back(l);
            res.levels.push_back(l);
        } catch (const NumericalUnderflow& e) {
            res.halt = LevelHalt::Underflow;
            res.note = e.what();
            return res;
        } catch (const HorizonTooSmall& e) {
            if (max_levels >= 0) throw;
            res.halt = LevelHalt::HorizonExhausted;
            res.note = e.what();
            return res;
        }
    }
    res.halt = LevelHalt::TargetReached;
    return res;
}

void validate_levels(std::span<const LevelParams> levels) {
    LevelParams prev = level_zero();
    double sum_eps = 0.0, sum_h2eps = 0.0;
    for (const auto& l : levels) {
        const int j = l.j;
        check(j == prev.j + 1, j, "level indices must be consecutive");

        // (a) ranges
        check(l.eps > 0.0 && l.eps <= kNinth, j, "eps outside (0, 1/9]");
        check(l.theta > 0.0 && l.theta <= kNinth, j, "theta outside (0, 1/9]");
        check(l.theta_star > 0.0 && l.theta_star <= 0.125 + 1e-15, j,
              "theta* outside (0, 1/8]");
        check(l.I >= 72.0, j, "window length I below 72");
        check(l.t > 1.0, j, "tangent point t must exceed 1");
        check(l.B > 0.0 && l.h > 0.0, j, "B and h must be positive");
        check(l.eps_star > 0.0 && l.eps_star <= kNinth, j, "eps* outside (0, 1/9]");

        // (b) strict decrease, with the cap eps_j < eps*_j <= eps_(j-1)/2
        check(l.eps < l.eps_star, j, "eps must fall strictly below eps*");
        check(l.eps_star <= prev.eps / 2.0 * (1.0 + 1e-12), j,
              "eps* must not exceed half the previous eps");
        check(l.theta <= std::min(prev.theta / 2.0, std::pow(2.0, -j) / l.B) * (1.0 + 1e-12),
              j, "theta exceeds min(theta_prev/2, 2^-j/B)");

        // (c) theta* decreasing, I increasing
        if (j >= 2) {
            check(l.theta_star < prev.theta_star, j, "theta* must decrease");
            check(l.I > prev.I, j, "window length I must increase");
        }

        // (d) floor identities; once eps drops below 1 ulp of 1, theta* and
        // theta coincide in binary64 and only <= is checkable
        check(l.theta <= l.theta_star, j, "theta must not exceed theta*");
        if (l.eps > 1e-15)
            check(l.theta / l.theta_star < 1.0, j, "theta/theta* must be < 1");
        double prod = l.theta_star * l.eps * l.I;
        check(prod <= 1.0 + 1e-9, j, "theta* eps I exceeds 1");
        check(prod > 1.0 - l.theta_star * l.eps - 1e-9, j,
              "theta* eps I below its floor identity bound");

        // (f) summability drivers
        check(l.h * l.h * l.eps <= std::pow(2.0, -j) * (1.0 + 1e-12), j,
              "h^2 eps exceeds 2^-j");
        check(l.eps <= std::pow(9.0, -j) * (1.0 + 1e-12), j, "eps exceeds 9^-j");

        // (g) growth
        check(l.h * l.h * l.eps / l.theta >= l.B * (1.0 - 1e-12), j,
              "h^2 eps / theta falls below B");
        if (j >= 2) check(l.B > static_cast<double>(j), j, "B must exceed j");
        check(l.h >= 3.0 * prev.h * (1.0 - 1e-15), j, "h must grow by a factor >= 3");

        // theta/h strictly decreasing
        check(l.theta / l.h < prev.theta / prev.h, j, "theta/h must decrease");

        sum_eps += l.eps;
        sum_h2eps += l.h * l.h * l.eps;
        prev = l;
    }
    if (!levels.empty()) {
        check(sum_eps <= 0.125 + 1e-12, levels.back().j, "sum of eps exceeds 1/8");
        check(sum_h2eps <= 1.0 + 1e-12, levels.back().j, "sum of h^2 eps exceeds 1");
        double cap = 1.0 - std::pow(2.0, -levels.back().j);
        check(sum_h2eps <= cap + 1e-12, levels.back().j,
              "sum of h^2 eps exceeds 1 - 2^-J");
    }
}

}  // namespace revmix
