#include "revmix/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "revmix/errors.hpp"

namespace revmix {

void RateSequence::validate() const {
    if (values.empty()) throw RateOutOfRange("rate sequence is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        double z = values[i];
        if (!(z > 0.0) || !(z < 1.0))
            throw RateOutOfRange("zeta_" + std::to_string(i + 1) + " = " +
                                 std::to_string(z) + " lies outside (0, 1)");
    }
}

std::vector<std::string> RateSequence::trend_warnings() const {
    std::vector<std::string> w;
    if (values.size() < 10) return w;
    std::size_t chunk = values.size() / 10;
    double head_min = *std::min_element(values.begin(),
                                        values.begin() + static_cast<std::ptrdiff_t>(chunk));
    double tail_min = *std::min_element(values.end() - static_cast<std::ptrdiff_t>(chunk),
                                        values.end());
    if (!(values.back() < values.front()))
        w.push_back("rate sequence does not end below its first value");
    if (!(tail_min < 0.5 * head_min))
        w.push_back("rate sequence tail has not halved relative to its head");
    return w;
}

RateSequence RateSequence::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParams("cannot open rate file " + path);
    RateSequence r;
    double v;
    while (is >> v) r.values.push_back(v);
    r.validate();
    return r;
}

std::function<double(std::int64_t)> stretched_exp_fn(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw InvalidParams("stretched-exp: alpha must lie in (0, 1)");
    return [alpha](std::int64_t n) {
        return std::exp(-std::pow(static_cast<double>(n), alpha));
    };
}

std::function<double(std::int64_t)> poly_log_fn() {
    return [](std::int64_t n) {
        double x = static_cast<double>(n);
        return std::exp(-x / std::log(x + 2.0));
    };
}

std::function<double(std::int64_t)> stretched_exp_xi_fn(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw InvalidParams("stretched-exp: alpha must lie in (0, 1)");
    if (alpha == 0.5)  // hot path: hundred-million-point horizons
        return [](std::int64_t n) { return -std::sqrt(static_cast<double>(n)); };
    return [alpha](std::int64_t n) { return -std::pow(static_cast<double>(n), alpha); };
}

std::function<double(std::int64_t)> poly_log_xi_fn() {
    return [](std::int64_t n) {
        double x = static_cast<double>(n);
        return -x / std::log(x + 2.0);
    };
}

RateSequence RateSequence::stretched_exp(double alpha, std::int64_t horizon) {
    auto fn = stretched_exp_fn(alpha);
    RateSequence r;
    r.values.reserve(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) r.values.push_back(fn(n));
    r.validate();
    return r;
}

RateSequence RateSequence::poly_log(std::int64_t horizon) {
    auto fn = poly_log_fn();
    RateSequence r;
    r.values.reserve(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) r.values.push_back(fn(n));
    r.validate();
    return r;
}

std::vector<double> log_rates(const RateSequence& rates) {
    rates.validate();
    std::vector<double> xi;
    xi.reserve(rates.values.size());
    for (double z : rates.values) xi.push_back(std::log(z));
    return xi;
}

Envelope::Envelope(std::vector<double> bx, std::vector<double> by)
    : bx_(std::move(bx)), by_(std::move(by)) {
    if (bx_.size() != by_.size() || bx_.size() < 2)
        throw DegenerateEnvelope("envelope needs at least one segment");
    if (bx_.front() != 0.0 || by_.front() != 0.0)
        throw DegenerateEnvelope("envelope must start at (0, 0)");
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < bx_.size(); ++i) {
        double s = slope(i);
        if (!(s < 0.0)) throw DegenerateEnvelope("non-negative envelope slope");
        if (s < prev) throw DegenerateEnvelope("slopes not nondecreasing");
        prev = s;
    }
}

double Envelope::value(double x) const {
    if (x < 0.0 || x > bx_.back())
        throw InvalidParams("envelope value requested outside [0, x_max]");
    auto it = std::upper_bound(bx_.begin(), bx_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - bx_.begin());
    if (i == 0) return by_.front();
    if (i >= bx_.size()) i = bx_.size() - 1;
    std::size_t seg = i - 1;
    return by_[seg] + slope(seg) * (x - bx_[seg]);
}

Envelope build_envelope(const std::function<double(std::int64_t)>& xi, std::int64_t horizon) {
    if (horizon < 1) throw DegenerateEnvelope("horizon must be >= 1");
    std::vector<double> bx{0.0}, by{0.0};
    bx.reserve(static_cast<std::size_t>(horizon) + 1);
    by.reserve(static_cast<std::size_t>(horizon) + 1);
    for (std::int64_t n = 1; n <= horizon; ++n) {
        double x = static_cast<double>(n);
        double y = xi(n);
        if (!(y < 0.0))
            throw RateOutOfRange("log rate at n = " + std::to_string(n) + " is not negative");
        // pop while the new point turns the chain non-convex (collinear
        // interior vertices are dropped too, keeping the longest segment)
        while (bx.size() >= 2) {
            double sl = (by.back() - by[by.size() - 2]) / (bx.back() - bx[bx.size() - 2]);
            double sn = (y - by.back()) / (x - bx.back());
            if (sn <= sl) {
                bx.pop_back();
                by.pop_back();
            } else {
                break;
            }
        }
        bx.push_back(x);
        by.push_back(y);
    }
    // keep only the strictly-decreasing part
    while (bx.size() >= 2 &&
           (by.back() - by[by.size() - 2]) >= 0.0) {
        bx.pop_back();
        by.pop_back();
    }
    if (bx.size() < 2) throw DegenerateEnvelope("no strictly negative-slope segment");
    return Envelope(std::move(bx), std::move(by));
}

Envelope build_envelope(std::span<const double> xi) {
    return build_envelope(
        [&xi](std::int64_t n) { return xi[static_cast<std::size_t>(n - 1)]; },
        static_cast<std::int64_t>(xi.size()));
}

Tangent tangent_select(const Envelope& env, double D, double s) {
    if (!(D < 0.0)) throw InvalidParams("tangent_select: D must be negative");
    if (!(s > 0.0)) throw InvalidParams("tangent_select: s must be positive");
    for (std::size_t i = 0; i < env.segment_count(); ++i) {
        double slope = env.slope(i);
        if (slope < -s) continue;
        double intercept = env.breakpoint_y(i) - slope * env.breakpoint_x(i);
        if (intercept > D) continue;
        Tangent tg;
        tg.t = 0.5 * (env.breakpoint_x(i) + env.breakpoint_x(i + 1));
        tg.intercept = intercept;
        tg.slope = slope;
        tg.segment = i;
        return tg;
    }
    throw HorizonTooSmall(
        "no envelope segment has slope >= -" + std::to_string(s) +
        " and value <= " + std::to_string(D) +
        " at 0 within horizon " + std::to_string(env.x_max()) +
        "; supply a longer rate sequence");
}

}  // namespace revmix
