#include "revmix/superposed.hpp"

#include <algorithm>
#include <cmath>

#include "revmix/csv.hpp"
#include "revmix/errors.hpp"

namespace revmix {

namespace {

using cd = std::complex<double>;

struct Matrix3c {
    std::array<cd, 9> e{};
    static constexpr std::size_t idx(int i, int j) {
        return static_cast<std::size_t>(i + 1) * 3 + static_cast<std::size_t>(j + 1);
    }
    Matrix3c mul(const Matrix3c& o) const {
        Matrix3c r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                cd s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += e[static_cast<std::size_t>(i * 3 + k)] *
                         o.e[static_cast<std::size_t>(k * 3 + j)];
                r.e[static_cast<std::size_t>(i * 3 + j)] = s;
            }
        return r;
    }
    static Matrix3c identity() {
        Matrix3c m;
        m.e[0] = m.e[4] = m.e[8] = 1.0;
        return m;
    }
};

Matrix3c matrix_power(Matrix3c base, std::uint64_t n) {
    Matrix3c acc = Matrix3c::identity();
    while (n) {
        if (n & 1) acc = acc.mul(base);
        base = base.mul(base);
        n >>= 1;
    }
    return acc;
}

// in-place radix-2 FFT with kernel exp(-2*pi*i*jk/N)
void dft_inplace(std::vector<cd>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * M_PI / static_cast<double>(len);
        cd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// expected number of excursion sojourns in the window; the per-trial cost of
// run-length simulation
double expected_excursions(const BlockParams& p, double window) {
    return window * p.theta_star * p.epsilon + 1.0;
}

constexpr double kRunLengthCostCap = 64.0;
constexpr double kExactWindowCap = 9.0e15;  // windows must stay integer-exact
constexpr std::size_t kTableCap = std::size_t{1} << 22;

}  // namespace

void SuperposedConfig::validate() const {
    if (levels.size() < 2)
        throw InvalidParams("superposed config: at least 2 levels required");
    validate_levels(levels);
    if (trials < 1 || path_length < 1)
        throw InvalidParams("superposed config: trials and path_length must be >= 1");
}

BlockParams SuperposedConfig::block(std::size_t level_index) const {
    const LevelParams& l = levels.at(level_index);
    return BlockParams(l.eps, l.theta);
}

SuperposedSample sample(const SuperposedConfig& config, std::int64_t length,
                        std::uint64_t seed) {
    // Deliberately lighter than validate(): manually overridden level lists
    // are allowed here, as long as each level is a valid block and the scale
    // ratios keep the encoding injective.
    if (config.levels.empty()) throw InvalidParams("sample: no levels");
    for (std::size_t u = 0; u + 1 < config.levels.size(); ++u)
        if (!(config.levels[u + 1].h >= 3.0 * config.levels[u].h * (1.0 - 1e-12)))
            throw ScaleRatioViolation("sample: scale ratio below 3 between levels " +
                                      std::to_string(u + 1) + " and " +
                                      std::to_string(u + 2));
    SuperposedSample out;
    out.level_paths.reserve(config.levels.size());
    for (std::size_t u = 0; u < config.levels.size(); ++u)
        out.level_paths.push_back(
            sample_path(config.block(u), length, derive_seed(seed, u + 1)));
    out.combined.assign(static_cast<std::size_t>(length), 0.0);
    for (std::size_t u = 0; u < config.levels.size(); ++u) {
        double h = config.levels[u].h;
        for (std::size_t k = 0; k < out.combined.size(); ++k)
            out.combined[k] += h * out.level_paths[u][k];
    }
    return out;
}

double encode_state(std::span<const std::int8_t> y, std::span<const double> h) {
    if (y.size() != h.size()) throw InvalidParams("encode_state: size mismatch");
    for (std::size_t u = 0; u + 1 < h.size(); ++u)
        if (!(h[u + 1] >= 3.0 * h[u] * (1.0 - 1e-12)))
            throw ScaleRatioViolation("scale ratio below 3 between levels " +
                                      std::to_string(u + 1) + " and " + std::to_string(u + 2));
    double s = 0.0;
    for (std::size_t u = 0; u < y.size(); ++u) s += h[u] * y[u];
    return s;
}

std::complex<double> chain_sum_cf(const BlockParams& p, double window, double t) {
    if (!(window >= 1.0) || window != std::floor(window) || window > kExactWindowCap)
        throw InvalidParams("chain_sum_cf: window must be an exact integer below 2^53");
    const cd em(std::cos(t), -std::sin(t));  // e^{-it}
    const cd ep(std::cos(t), std::sin(t));   // e^{+it}
    Matrix3 tr = make_transition(p);
    Matrix3c m;
    const std::array<cd, 3> d{em, cd(1.0), ep};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.e[static_cast<std::size_t>(i * 3 + j)] =
                tr.e[static_cast<std::size_t>(i * 3 + j)] * d[static_cast<std::size_t>(j)];
    Matrix3c pw = matrix_power(m, static_cast<std::uint64_t>(window - 1.0));
    auto pi = marginal3(p.epsilon);
    std::array<cd, 3> v{pi[0] * em, cd(pi[1]), pi[2] * ep};
    cd total = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            total += v[static_cast<std::size_t>(i)] * pw.e[static_cast<std::size_t>(i * 3 + j)];
    return total;
}

BlockSumTable::BlockSumTable(const BlockParams& p, double window) {
    if (!(window >= 1.0) || window != std::floor(window) || window > kExactWindowCap)
        throw InvalidParams("sum table: window must be an exact integer below 2^53");
    const double sd = std::sqrt(partial_sum_variance(p, window));
    // 64 standard deviations or 1600 excursion e-folds, whichever is wider,
    // keeps the wrap-around mass far below 1e-12
    double need = std::max({64.0 * sd, 1600.0 / p.theta, 4096.0});
    std::size_t n = 1;
    while (static_cast<double>(n) < 2.0 * need) n <<= 1;
    if (n > kTableCap)
        throw InvalidParams("sum table: required lattice of " + std::to_string(n) +
                            " exceeds the exact-aggregation cap; window too large");

    std::vector<cd> spec(n);
    spec[0] = 1.0;
    for (std::size_t l = 1; l <= n / 2; ++l) {
        double t = 2.0 * M_PI * static_cast<double>(l) / static_cast<double>(n);
        cd v = chain_sum_cf(p, window, t);
        spec[l] = v;
        if (l < n / 2) spec[n - l] = std::conj(v);
    }
    dft_inplace(spec);

    half_ = static_cast<std::int64_t>(n / 2);
    std::vector<double> pmf(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double mass = spec[k].real() / static_cast<double>(n);
        if (mass < 0.0) mass = 0.0;
        pmf[k] = mass;
        total += mass;
    }
    // the CF values carry ~window*ulp relative noise from the repeated
    // squarings, so the inverted mass can drift by ~1e-6 at the largest
    // windows; far below Monte Carlo resolution, and renormalized away
    if (std::abs(total - 1.0) > 1e-4)
        throw InvalidParams("sum table: inverted mass " + format_double(total));
    cdf_.resize(n);
    double acc = 0.0;
    // cdf over values -half..half-1 <-> lattice indices half..n-1, 0..half-1
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t lattice = (k + static_cast<std::size_t>(half_)) % n;
        acc += pmf[lattice] / total;
        cdf_[k] = acc;
    }
}

double BlockSumTable::sample(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    if (k >= cdf_.size()) k = cdf_.size() - 1;
    return static_cast<double>(static_cast<std::int64_t>(k) - half_);
}

double BlockSumTable::mass_at(std::int64_t value) const {
    if (value < -half_ || value >= half_) return 0.0;
    std::size_t k = static_cast<std::size_t>(value + half_);
    double lo = k == 0 ? 0.0 : cdf_[k - 1];
    return cdf_[k] - lo;
}

double sample_block_sum_runs(const BlockParams& p, double window, Rng& rng) {
    if (!(window >= 1.0)) throw InvalidParams("block sum: window must be >= 1");
    const double a = p.theta_star * p.epsilon;
    double remaining = window;
    double sum = 0.0;

    // stationary state of the first step; forward sojourns are memoryless
    double u = rng.uniform();
    int state = u < p.epsilon / 2.0 ? -1 : (u < p.epsilon ? 1 : 0);
    while (remaining > 0.0) {
        if (state == 0) {
            remaining -= rng.geometric(a);
            if (remaining <= 0.0) break;
            state = rng.uniform() < 0.5 ? -1 : 1;
        } else {
            double run = rng.geometric(p.theta);
            sum += static_cast<double>(state) * std::min(run, remaining);
            remaining -= run;
            state = 0;
        }
    }
    return sum;
}

LevelSumSampler::LevelSumSampler(const BlockParams& p, double window)
    : bp_(p), window_(window) {
    if (expected_excursions(p, window) > kRunLengthCostCap)
        table_ = std::make_shared<const BlockSumTable>(p, window);
}

double LevelSumSampler::draw(Rng& rng) const {
    return table_ ? table_->sample(rng) : sample_block_sum_runs(bp_, window_, rng);
}

BetaBoundReport beta_bound_report(const std::vector<LevelParams>& levels,
                                  const Envelope& env,
                                  const std::function<double(std::int64_t)>& xi,
                                  std::int64_t n_max, std::size_t max_rows) {
    if (levels.empty()) throw InvalidParams("beta bound report: no levels");
    if (n_max < 1 || static_cast<double>(n_max) > env.x_max())
        throw BoundViolation("beta bound report: n_max outside the envelope horizon");

    const std::size_t J = levels.size();
    // incremental powers of (1-theta) and (1-theta*) per level
    std::vector<double> y(J), z(J), yn(J, 1.0), zn(J, 1.0), pi0(J), log6eps(J);
    for (std::size_t u = 0; u < J; ++u) {
        y[u] = 1.0 - levels[u].theta;
        z[u] = 1.0 - levels[u].theta_star;
        pi0[u] = levels[u].eps;
        log6eps[u] = std::log(6.0) + std::log(levels[u].eps);
    }

    BetaBoundReport rep;
    std::int64_t stride = std::max<std::int64_t>(1, n_max / static_cast<std::int64_t>(max_rows));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double beta_sum = 0.0;
        double log_bound = -std::numeric_limits<double>::infinity();
        double phin = env.value(static_cast<double>(n));
        for (std::size_t u = 0; u < J; ++u) {
            yn[u] *= y[u];
            zn[u] *= z[u];
            const double eps = pi0[u];
            // exact beta of the lag-n joint: (1/2) sum_ij pi_i |p^n_ij - pi_j|
            const double znv = zn[u], ynv = yn[u];
            const double half_eps = eps / 2.0;
            double b = 0.0;
            // rows +-1 (each contributes identically by sign symmetry)
            b += 2.0 * half_eps *
                 (std::abs(znv * (1.0 - half_eps) + (ynv - znv) * 0.5) +   // same sign
                  std::abs(-znv * half_eps - (ynv - znv) * 0.5) +          // opposite sign
                  std::abs(-znv * (1.0 - eps)));                           // to 0
            // row 0
            b += (1.0 - eps) * (2.0 * std::abs(-znv * half_eps) +
                                std::abs(znv * (1.0 - (1.0 - eps))));
            beta_sum += 0.5 * b;

            double lvl_log = log6eps[u] - levels[u].theta * static_cast<double>(n);
            if (lvl_log > -static_cast<double>(levels[u].j) + phin + 1e-9)
                throw BoundViolation("per-level envelope domination fails at n = " +
                                     std::to_string(n) + ", level " +
                                     std::to_string(levels[u].j));
            log_bound = log_bound > lvl_log
                            ? log_bound + std::log1p(std::exp(lvl_log - log_bound))
                            : lvl_log + std::log1p(std::exp(log_bound - lvl_log));
        }
        double xv = xi(n);
        if (!(log_bound < xv))
            throw BoundViolation("mixing bound does not fall below the rate at n = " +
                                 std::to_string(n));
        if (beta_sum > std::exp(log_bound) * (1.0 + 1e-9) + 1e-300)
            throw BoundViolation("exact beta sum exceeds its closed-form bound at n = " +
                                 std::to_string(n));
        rep.max_log_margin = n == 1 ? log_bound - xv
                                    : std::max(rep.max_log_margin, log_bound - xv);
        ++rep.checked;
        if ((n - 1) % stride == 0 || n == n_max)
            rep.rows.push_back({static_cast<double>(n), beta_sum, log_bound, std::exp(xv),
                                xv});
    }
    return rep;
}

std::vector<DissipationRow> dissipation_probe(const SuperposedConfig& config,
                                              std::span<const double> n_list,
                                              double window, std::int64_t trials,
                                              std::uint64_t seed) {
    config.validate();
    if (trials < 10000) throw InvalidParams("dissipation probe: trials must be >= 10^4");
    if (!(window > 0.0)) throw InvalidParams("dissipation probe: window must be positive");

    std::vector<DissipationRow> rows;
    for (std::size_t point = 0; point < n_list.size(); ++point) {
        const double n = n_list[point];
        if (!(n >= 1.0)) throw InvalidParams("dissipation probe: n must be >= 1");
        std::vector<LevelSumSampler> samplers;
        samplers.reserve(config.levels.size());
        for (std::size_t u = 0; u < config.levels.size(); ++u)
            samplers.emplace_back(config.block(u), n);

        const double root = std::sqrt(n);
        std::vector<double> xs(static_cast<std::size_t>(trials));
        std::uint64_t point_seed = derive_seed(seed, point);
        for (std::int64_t tr = 0; tr < trials; ++tr) {
            Rng rng(derive_seed(point_seed, static_cast<std::uint64_t>(tr)));
            double s = 0.0;
            for (std::size_t u = 0; u < config.levels.size(); ++u)
                s += config.levels[u].h * samplers[u].draw(rng);
            xs[static_cast<std::size_t>(tr)] = s / root;
        }
        std::sort(xs.begin(), xs.end());

        // max over centers on a 0.1 grid of the mass in (c - w/2, c + w/2)
        const double half = window / 2.0;
        const double step = 0.1;
        std::size_t lo = 0, hi = 0, best = 0;
        std::int64_t ci = static_cast<std::int64_t>(std::floor(xs.front() / step)) - 1;
        const std::int64_t ci_end =
            static_cast<std::int64_t>(std::ceil(xs.back() / step)) + 1;
        while (ci <= ci_end) {
            double c = static_cast<double>(ci) * step;
            while (lo < xs.size() && xs[lo] <= c - half) ++lo;
            while (hi < xs.size() && xs[hi] < c + half) ++hi;
            best = std::max(best, hi - lo);
            if (lo >= xs.size()) break;
            if (hi == lo) {
                // window empty: jump to just before the next occupied region
                auto target =
                    static_cast<std::int64_t>(std::floor((xs[lo] - half) / step)) - 1;
                if (target > ci) ci = target;
            }
            ++ci;
        }
        double p = static_cast<double>(best) / static_cast<double>(trials);
        rows.push_back({n, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)),
                        trials});
    }
    return rows;
}

std::vector<double> default_dissipation_windows(const SuperposedConfig& config) {
    std::vector<double> n_list{4.0};
    for (const auto& l : config.levels) {
        bool feasible = true;
        for (const auto& u : config.levels) {
            if (expected_excursions(BlockParams(u.eps, u.theta), l.I) <= kRunLengthCostCap)
                continue;
            double sd = std::sqrt(partial_sum_variance(BlockParams(u.eps, u.theta), l.I));
            double need = std::max({64.0 * sd, 1600.0 / u.theta, 4096.0});
            if (l.I > kExactWindowCap || 2.0 * need > static_cast<double>(kTableCap))
                feasible = false;
        }
        if (feasible) n_list.push_back(l.I);
    }
    return n_list;
}

SublimitResult sublimit_probe(const SuperposedConfig& config, int j,
                              std::span<const double> t_grid, std::int64_t trials,
                              std::uint64_t seed, bool full_chain) {
    config.validate();
    if (j < 1 || static_cast<std::size_t>(j) > config.levels.size())
        throw InvalidParams("sublimit probe: level index out of range");
    if (trials < 10000) throw InvalidParams("sublimit probe: trials must be >= 10^4");

    const LevelParams& lv = config.levels[static_cast<std::size_t>(j - 1)];
    const double scale = lv.theta / lv.h;

    std::vector<LevelSumSampler> samplers;
    if (full_chain) {
        for (std::size_t u = 0; u < config.levels.size(); ++u)
            samplers.emplace_back(config.block(u), lv.I);
    } else {
        samplers.emplace_back(config.block(static_cast<std::size_t>(j - 1)), lv.I);
    }

    std::vector<double> ys(static_cast<std::size_t>(trials));
    std::uint64_t probe_seed = derive_seed(seed, static_cast<std::uint64_t>(j) * 2 +
                                                     (full_chain ? 1 : 0));
    for (std::int64_t tr = 0; tr < trials; ++tr) {
        Rng rng(derive_seed(probe_seed, static_cast<std::uint64_t>(tr)));
        double s = 0.0;
        if (full_chain) {
            for (std::size_t u = 0; u < config.levels.size(); ++u)
                s += config.levels[u].h * samplers[u].draw(rng);
        } else {
            s = lv.h * samplers[0].draw(rng);
        }
        ys[static_cast<std::size_t>(tr)] = scale * s;
    }

    SublimitResult res;
    res.j = j;
    res.full_chain = full_chain;
    res.normalizer = lv.h / lv.theta;
    res.trials = trials;
    CfGrid ecf = empirical_cf(ys, t_grid);
    res.distance = cf_sup_distance(ecf, &p1sl_cf);
    return res;
}

double superposed_var_rate(const std::vector<LevelParams>& levels, double n) {
    double v = 0.0;
    for (const auto& l : levels) v += l.h * l.h * u_n(BlockParams(l.eps, l.theta), n);
    return v;
}

double sublimit_lower_second_moment(const std::vector<LevelParams>& levels, int j) {
    if (j < 2 || static_cast<std::size_t>(j) > levels.size())
        throw InvalidParams("lower second moment: level index out of range");
    const LevelParams& lv = levels[static_cast<std::size_t>(j - 1)];
    double scale2 = (lv.theta / lv.h) * (lv.theta / lv.h);
    double total = 0.0;
    for (int u = 1; u < j; ++u) {
        const LevelParams& lu = levels[static_cast<std::size_t>(u - 1)];
        total += lu.h * lu.h * partial_sum_variance(BlockParams(lu.eps, lu.theta), lv.I);
    }
    return scale2 * total;
}

}  // namespace revmix
