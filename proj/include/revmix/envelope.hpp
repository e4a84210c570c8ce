#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace revmix {

// A prescribed mixing-rate sequence zeta_1..zeta_N, each value in (0, 1).
struct RateSequence {
    std::vector<double> values;  // values[n-1] = zeta_n

    std::int64_t horizon() const { return static_cast<std::int64_t>(values.size()); }
    double zeta(std::int64_t n) const { return values[static_cast<std::size_t>(n - 1)]; }

    void validate() const;  // throws RateOutOfRange on values outside (0,1)

    // Advisory decay heuristic: warns (does not throw) when the sequence does
    // not trend downward.  Returns warning strings; empty when clean.
    std::vector<std::string> trend_warnings() const;

    static RateSequence from_file(const std::string& path);
    static RateSequence stretched_exp(double alpha, std::int64_t horizon);
    static RateSequence poly_log(std::int64_t horizon);
};

// zeta evaluators for the named presets, for streaming construction at
// horizons too large to store
std::function<double(std::int64_t)> stretched_exp_fn(double alpha);
std::function<double(std::int64_t)> poly_log_fn();

// log-rate evaluators for the presets.  These stay finite far beyond the
// point where zeta itself underflows binary64 (for stretched-exp(1/2) that
// happens near n = 5.6e5), so all envelope and bound arithmetic runs on
// them.
std::function<double(std::int64_t)> stretched_exp_xi_fn(double alpha);
std::function<double(std::int64_t)> poly_log_xi_fn();

std::vector<double> log_rates(const RateSequence& rates);

// Piecewise-linear convex minorant of {(0,0)} union {(n, xi_n)} with
// strictly negative, nondecreasing slopes.  Only the breakpoints are stored;
// strictly convex rate data keeps every input point as a vertex, so at
// hundred-million-point horizons each retained vector matters.
class Envelope {
  public:
    Envelope(std::vector<double> bx, std::vector<double> by);

    std::size_t segment_count() const { return bx_.size() - 1; }
    double breakpoint_x(std::size_t i) const { return bx_[i]; }
    double breakpoint_y(std::size_t i) const { return by_[i]; }
    double slope(std::size_t i) const {
        return (by_[i + 1] - by_[i]) / (bx_[i + 1] - bx_[i]);
    }
    double x_max() const { return bx_.back(); }

    // value at x in [0, x_max]
    double value(double x) const;

    // steepest slope (the slope of the first segment)
    double min_slope() const { return slope(0); }

  private:
    std::vector<double> bx_, by_;
};

// Lower convex hull of {(0,0)} union {(n, xi(n)) : 1 <= n <= horizon},
// truncated to its strictly-decreasing part.  The streaming form never
// stores the input sequence.
Envelope build_envelope(std::span<const double> xi);
Envelope build_envelope(const std::function<double(std::int64_t)>& xi, std::int64_t horizon);

struct Tangent {
    double t = 0.0;          // a differentiability point (segment midpoint)
    double intercept = 0.0;  // value of the segment's line at x = 0
    double slope = 0.0;
    std::size_t segment = 0;
};

// First (leftmost) hull segment whose line L satisfies slope in [-s, 0) and
// L(0) <= D; returns its midpoint.  Throws HorizonTooSmall when no segment
// within the horizon qualifies.
Tangent tangent_select(const Envelope& env, double D, double s);

}  // namespace revmix
