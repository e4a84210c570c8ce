#include "revmix/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "revmix/csv.hpp"
#include "revmix/errors.hpp"
#include "revmix/rng.hpp"

namespace revmix {

namespace {

// log(1+z) for complex z, accurate when |z| is tiny
std::complex<double> clog1p(std::complex<double> z) {
    if (std::abs(z) > 1e-4) return std::log(1.0 + z);
    std::complex<double> z2 = z * z;
    return z - z2 / 2.0 + z2 * z / 3.0 - z2 * z2 / 4.0;
}

void check_ap(double a, double p) {
    if (!(a > 0.0) || !(a < 1.0) || !(p > 0.0) || !(p < 1.0))
        throw InvalidParams("g law: a and p must lie in (0, 1)");
}

}  // namespace

double IntegerPmf::stored_mass() const {
    double s = 0.0;
    for (double x : probs) s += x;
    return s;
}

void IntegerPmf::validate(double tol) const {
    if (probs.size() != static_cast<std::size_t>(2 * K + 1))
        throw InvalidParams("integer pmf: support size mismatch");
    for (double x : probs)
        if (!(x >= 0.0)) throw InvalidParams("integer pmf: negative probability");
    if (!(tail_mass >= 0.0)) throw InvalidParams("integer pmf: negative tail mass");
    double total = stored_mass() + tail_mass;
    if (std::abs(total - 1.0) > tol)
        throw InvalidParams("integer pmf: mass " + format_double(total));
}

IntegerPmf g_pmf(double a, double p, int K) {
    check_ap(a, p);
    if (K < 1) throw InvalidParams("g_pmf: K must be >= 1");
    IntegerPmf out;
    out.K = K;
    out.probs.assign(static_cast<std::size_t>(2 * K + 1), 0.0);
    out.probs[static_cast<std::size_t>(K)] = 1.0 - a;
    for (int n = 1; n <= K; ++n) {
        double mass = (a / 2.0) * p * std::pow(1.0 - p, n - 1);
        out.probs[static_cast<std::size_t>(K + n)] = mass;
        out.probs[static_cast<std::size_t>(K - n)] = mass;
    }
    out.tail_mass = a * std::pow(1.0 - p, K);
    return out;
}

int g_support_for_tail(double a, double p, double cap) {
    check_ap(a, p);
    // a (1-p)^K <= cap
    double k = (std::log(cap) - std::log(a)) / std::log1p(-p);
    int K = static_cast<int>(std::ceil(std::max(k, 1.0)));
    return std::min(K, 1 << 22);
}

std::complex<double> upsilon(std::complex<double> c) {
    return std::exp(c) - (1.0 + c);
}

// a * ((p/2) [1/(p - it + ups(-it)) + 1/(p + it + ups(it))] - 1), i.e. g_cf - 1
static std::complex<double> g_cf_delta(double a, double p, double t) {
    const std::complex<double> it(0.0, t);
    std::complex<double> den_minus = p - it + upsilon(-it);
    std::complex<double> den_plus = p + it + upsilon(it);
    std::complex<double> bracket = (p / 2.0) * (1.0 / den_minus + 1.0 / den_plus);
    return a * (bracket - 1.0);
}

std::complex<double> g_cf(double a, double p, double t) {
    check_ap(a, p);
    return 1.0 + g_cf_delta(a, p, t);
}

std::complex<double> g_cf_log(double a, double p, double t) {
    check_ap(a, p);
    return clog1p(g_cf_delta(a, p, t));
}

std::complex<double> g_cf_pow(double a, double p, double t, double count) {
    return std::exp(count * g_cf_log(a, p, t));
}

double p1sl_cf(double t) { return std::exp(1.0 / (1.0 + t * t) - 1.0); }

std::vector<double> p1sl_sample(std::int64_t count, std::uint64_t seed) {
    if (count < 1) throw InvalidParams("p1sl_sample: count must be >= 1");
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& x : out) {
        int n = rng.poisson1();
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += rng.laplace();
        x = s;
    }
    return out;
}

std::vector<double> default_t_grid(double t_max, double step) {
    std::vector<double> g;
    auto n = static_cast<std::int64_t>(std::llround(t_max / step));
    g.reserve(static_cast<std::size_t>(2 * n + 1));
    for (std::int64_t i = -n; i <= n; ++i) g.push_back(static_cast<double>(i) * step);
    return g;
}

double g_sum_cf_distance(double a, double p, double J,
                                  std::span<const double> t_grid) {
    check_ap(a, p);
    if (!(J >= 1.0)) throw InvalidParams("g_sum_cf_distance: J must be >= 1");
    double d = 0.0;
    for (double t : t_grid) {
        std::complex<double> cf = g_cf_pow(a, p, t * p, J);
        d = std::max(d, std::abs(cf - p1sl_cf(t)));
    }
    return d;
}

void CfGrid::validate(double tol) const {
    if (t_values.size() != values.size()) throw InvalidParams("cf grid: size mismatch");
    for (std::size_t i = 0; i < t_values.size(); ++i) {
        if (std::abs(values[i]) > 1.0 + tol)
            throw InvalidParams("cf grid: modulus exceeds 1");
        if (t_values[i] == 0.0 && std::abs(values[i] - 1.0) > tol)
            throw InvalidParams("cf grid: value at t=0 is not 1");
    }
}

void CfGrid::to_csv(std::ostream& os) const {
    os << csv_row({"t", "re", "im"});
    for (std::size_t i = 0; i < t_values.size(); ++i)
        os << csv_row({format_double(t_values[i]), format_double(values[i].real()),
                       format_double(values[i].imag())});
}

CfGrid empirical_cf(std::span<const double> samples, std::span<const double> t_grid) {
    if (samples.empty()) throw InvalidParams("empirical cf: no samples");
    CfGrid out;
    out.t_values.assign(t_grid.begin(), t_grid.end());
    out.values.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double t = t_grid[i];
        double re = 0.0, im = 0.0;
        for (double x : samples) {
            re += std::cos(t * x);
            im += std::sin(t * x);
        }
        out.values[i] = std::complex<double>(re, im) / static_cast<double>(samples.size());
    }
    return out;
}

double cf_sup_distance(const CfGrid& ecf, double (*reference)(double)) {
    double d = 0.0;
    for (std::size_t i = 0; i < ecf.t_values.size(); ++i)
        d = std::max(d, std::abs(ecf.values[i] - reference(ecf.t_values[i])));
    return d;
}

}  // namespace revmix
