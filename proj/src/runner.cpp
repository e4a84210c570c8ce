#include "revmix/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "revmix/block.hpp"
#include "revmix/csv.hpp"
#include "revmix/errors.hpp"
#include "revmix/excursion.hpp"
#include "revmix/levels.hpp"
#include "revmix/limit_law.hpp"
#include "revmix/mixing.hpp"
#include "revmix/rng.hpp"
#include "revmix/superposed.hpp"
#include "revmix/svg.hpp"

namespace revmix {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (rate_source != "stretched-exp" && rate_source != "poly-log" && rate_source != "file")
        throw InvalidParams("config: unknown rate source '" + rate_source + "'");
    if (rate_source == "stretched-exp" && (!(alpha > 0.0) || !(alpha < 1.0)))
        throw InvalidParams("config: stretched-exp alpha must lie in (0, 1)");
    if (rate_source == "file" && rates_file.empty())
        throw InvalidParams("config: rate_source 'file' needs rates_file");
    if (horizon < 1) throw InvalidParams("config: horizon must be >= 1");
    if (trials < 1) throw InvalidParams("config: trials must be >= 1");
    if (!(t_max > 0.0) || !(t_step > 0.0))
        throw InvalidParams("config: t grid must have positive range and step");
    if (out_dir.empty()) throw InvalidParams("config: output directory required");
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParams("config: cannot open " + path);
    nlohmann::json j;
    is >> j;
    ExperimentConfig c;
    c.rate_source = j.value("rate_source", c.rate_source);
    c.alpha = j.value("alpha", c.alpha);
    c.rates_file = j.value("rates_file", c.rates_file);
    c.horizon = j.value("horizon", c.horizon);
    c.max_levels = j.value("max_levels", c.max_levels);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.trials = j.value("trials", c.trials);
    if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<double>>();
    c.t_max = j.value("t_max", c.t_max);
    c.t_step = j.value("t_step", c.t_step);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.emit_svg = j.value("emit_svg", c.emit_svg);
    return c;
}

void ExperimentConfig::apply_quick_profile() {
    trials = 10000;
    horizon = 1000;
}

void ExperimentConfig::apply_full_profile() {
    trials = 100000;
    horizon = 10000;
}

std::function<double(std::int64_t)> ExperimentConfig::zeta_fn() const {
    if (rate_source == "stretched-exp") return stretched_exp_fn(alpha);
    if (rate_source == "poly-log") return poly_log_fn();
    auto rates = std::make_shared<RateSequence>(RateSequence::from_file(rates_file));
    if (rates->horizon() < horizon)
        throw InvalidParams("config: rate file shorter than the requested horizon");
    return [rates](std::int64_t n) { return rates->zeta(n); };
}

std::function<double(std::int64_t)> ExperimentConfig::xi_fn() const {
    if (rate_source == "stretched-exp") return stretched_exp_xi_fn(alpha);
    if (rate_source == "poly-log") return poly_log_xi_fn();
    auto zeta = zeta_fn();
    return [zeta](std::int64_t n) { return std::log(zeta(n)); };
}

namespace {

void write_matrix3(const Matrix3& m, const fs::path& path) {
    CsvBuilder csv;
    csv.header({"state", "-1", "0", "1"});
    for (int i = -1; i <= 1; ++i)
        csv.row({std::to_string(i), format_double(m.at(i, -1)), format_double(m.at(i, 0)),
                 format_double(m.at(i, 1))});
    csv.write(path);
}

struct CheckList {
    std::vector<std::string>& failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

}  // namespace

BlockRunResult run_block(double epsilon, double theta, std::int64_t n_max,
                         const std::string& out_dir, std::uint64_t seed,
                         std::int64_t wlaw_harvest, std::ostream& log) {
    BlockParams p(epsilon, theta);
    if (n_max < 1) throw InvalidParams("run_block: n_max must be >= 1");
    BlockRunResult res;
    CheckList ck{res.failures};
    fs::path out(out_dir);

    Matrix3 tr = make_transition(p);
    Matrix3 jn = make_joint(p);
    auto pi = marginal3(p.epsilon);
    write_matrix3(tr, out / "transition.csv");
    write_matrix3(jn, out / "joint.csv");

    for (int i = -1; i <= 1; ++i) {
        double rs = tr.at(i, -1) + tr.at(i, 0) + tr.at(i, 1);
        ck.expect(std::abs(rs - 1.0) <= 1e-15, "transition row sum differs from 1");
    }
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            ck.expect(jn.at(i, j) == jn.at(j, i), "joint symmetry");
            std::size_t iu = static_cast<std::size_t>(i + 1);
            ck.expect(std::abs(pi[iu] * tr.at(i, j) - jn.at(i, j)) <= 1e-15,
                      "joint vs marginal-times-transition");
            std::size_t ju = static_cast<std::size_t>(j + 1);
            ck.expect(std::abs(pi[iu] * tr.at(i, j) - pi[ju] * tr.at(j, i)) <= 1e-15,
                      "detailed balance");
        }
    for (int j = -1; j <= 1; ++j) {
        double col = 0.0;
        for (int i = -1; i <= 1; ++i) col += pi[static_cast<std::size_t>(i + 1)] * tr.at(i, j);
        ck.expect(std::abs(col - pi[static_cast<std::size_t>(j + 1)]) <= 1e-15,
                  "stationarity of the marginal");
    }

    Matrix3 a = averaging_matrix(p.epsilon);
    Matrix3 c = flip_matrix();
    Matrix3 zero{};
    ck.expect(a.mul(a).max_abs_diff(a) <= 1e-15, "A^2 = A");
    ck.expect(c.mul(c).max_abs_diff(c) <= 1e-15, "C^2 = C");
    ck.expect(a.mul(c).max_abs_diff(zero) <= 1e-15, "AC = 0");
    ck.expect(c.mul(a).max_abs_diff(zero) <= 1e-15, "CA = 0");

    // closed-form powers against brute force
    Matrix3 brute = tr;
    double worst_power = 0.0;
    for (std::int64_t n = 1; n <= std::min<std::int64_t>(n_max, 64); ++n) {
        worst_power = std::max(worst_power, n_step_closed(p, n).max_abs_diff(brute));
        brute = brute.mul(tr);
    }
    ck.expect(worst_power <= 1e-12, "closed-form power vs brute force");

    CsvBuilder beta_csv;
    beta_csv.header({"n", "beta_exact", "bound_six_eps", "entry_dev", "entry_bound"});
    double prev_beta = 1.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double b = beta_n_exact(p, n);
        double bound = 6.0 * p.epsilon * std::pow(1.0 - p.theta, static_cast<double>(n));
        Matrix3 pn = n_step_closed(p, n);
        double dev = 0.0;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                dev = std::max(dev,
                               std::abs(pn.at(i, j) - pi[static_cast<std::size_t>(j + 1)]));
        double entry_bound = 2.0 * std::pow(1.0 - p.theta, static_cast<double>(n));
        ck.expect(b <= bound * (1.0 + 1e-12), "beta(n) within 6 eps (1-theta)^n");
        ck.expect(bound <= 6.0 * p.epsilon * std::exp(-p.theta * static_cast<double>(n)) *
                               (1.0 + 1e-12),
                  "geometric bound within exponential bound");
        ck.expect(b <= prev_beta * (1.0 + 1e-12), "beta(n) nonincreasing");
        ck.expect(dev <= entry_bound * (1.0 + 1e-12), "entrywise power deviation bound");
        prev_beta = b;
        beta_csv.row({std::to_string(n), format_double(b), format_double(bound),
                      format_double(dev), format_double(entry_bound)});
    }
    beta_csv.write(out / "beta.csv");

    CsvBuilder cov_csv;
    cov_csv.header({"n", "closed_form", "moment_sum"});
    for (std::int64_t n = 0; n <= std::min<std::int64_t>(n_max, 50); ++n) {
        double closed = covariance(p, n);
        double moment = p.epsilon;  // n = 0: E X_0^2
        if (n >= 1) {
            Matrix3 pn = n_step_closed(p, n);
            moment = 0.0;
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j)
                    moment += static_cast<double>(i * j) *
                              pi[static_cast<std::size_t>(i + 1)] * pn.at(i, j);
        }
        ck.expect(std::abs(closed - moment) <= 1e-12, "covariance closed form vs moments");
        cov_csv.row({std::to_string(n), format_double(closed), format_double(moment)});
    }
    cov_csv.write(out / "covariance.csv");

    CsvBuilder var_csv;
    var_csv.header({"n", "u_n", "var_s_n", "limit"});
    const double limit = asymptotic_variance(p);
    double geo = p.epsilon + 2.0 * p.epsilon * (1.0 - p.theta) / p.theta;
    ck.expect(std::abs(limit - geo) <= 1e-12 * std::abs(limit),
              "asymptotic variance vs geometric series");
    double prev_u = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double u = u_n(p, static_cast<double>(n));
        ck.expect(u >= prev_u - 1e-12, "u_n nondecreasing");
        ck.expect(u <= limit * (1.0 + 1e-12), "u_n below its limit");
        prev_u = u;
        if (n <= 64 || n == n_max || n % std::max<std::int64_t>(1, n_max / 64) == 0)
            var_csv.row({std::to_string(n), format_double(u),
                         format_double(partial_sum_variance(p, static_cast<double>(n))),
                         format_double(limit)});
    }
    var_csv.write(out / "variance.csv");

    if (wlaw_harvest > 0) {
        WLawResult w = w_law_distance(p, wlaw_harvest, seed);
        CsvBuilder wcsv;
        wcsv.header({"value", "count", "empirical", "exact"});
        for (const auto& [k, cnt] : w.counts)
            wcsv.row({std::to_string(k), std::to_string(cnt),
                      format_double(static_cast<double>(cnt) /
                                    static_cast<double>(w.harvested)),
                      format_double(w.exact.at(static_cast<int>(
                          std::clamp<std::int64_t>(k, -w.exact.K, w.exact.K))))});
        wcsv.write(out / "wlaw.csv");
        log << "excursion-law TV distance over " << w.harvested
            << " harvested sums: " << format_double(w.tv_distance) << "\n";
    }

    res.ok = res.failures.empty();
    log << (res.ok ? "block checks passed" : "block checks FAILED") << "\n";
    for (const auto& f : res.failures) log << "  failed: " << f << "\n";
    return res;
}

namespace {

void write_levels_csv(const std::vector<LevelParams>& levels, const fs::path& path) {
    CsvBuilder csv;
    csv.header({"j", "B", "eps_star", "t", "line_intercept", "line_slope", "eps", "theta",
                "theta_star", "I", "h", "h2_eps", "theta_star_eps_I"});
    for (const auto& l : levels)
        csv.row({std::to_string(l.j), format_double(l.B), format_double(l.eps_star),
                 format_double(l.t), format_double(l.line_intercept),
                 format_double(l.line_slope), format_double(l.eps), format_double(l.theta),
                 format_double(l.theta_star), format_double(l.I), format_double(l.h),
                 format_double(l.h * l.h * l.eps),
                 format_double(l.theta_star * l.eps * l.I)});
    csv.write(path);
}

void write_config_csv(const ExperimentConfig& cfg, const fs::path& path) {
    CsvBuilder csv;
    csv.header({"key", "value"});
    csv.row({"rate_source", cfg.rate_source});
    csv.row({"alpha", format_double(cfg.alpha)});
    csv.row({"rates_file", cfg.rates_file});
    csv.row({"horizon", std::to_string(cfg.horizon)});
    csv.row({"max_levels", std::to_string(cfg.max_levels)});
    csv.row({"master_seed", std::to_string(cfg.master_seed)});
    csv.row({"trials", std::to_string(cfg.trials)});
    csv.row({"t_max", format_double(cfg.t_max)});
    csv.row({"t_step", format_double(cfg.t_step)});
    csv.write(path);
}

}  // namespace

FullRunResult run_full(const ExperimentConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.trials < 10000)
        throw InvalidParams(
            "run_full: the Monte Carlo probes need at least 10^4 trials; got " +
            std::to_string(cfg.trials));
    FullRunResult res;
    fs::path out(cfg.out_dir);
    write_config_csv(cfg, out / "config.csv");

    auto xi = cfg.xi_fn();

    log << "building envelope over horizon " << cfg.horizon << "\n";
    Envelope env = build_envelope(xi, cfg.horizon);

    LevelGenResult gen = generate_levels(env, cfg.max_levels);
    res.achieved_levels = static_cast<int>(gen.levels.size());
    res.halt_note = gen.note;
    switch (gen.halt) {
        case LevelHalt::TargetReached:
            log << "level generation reached its target J = " << res.achieved_levels << "\n";
            break;
        case LevelHalt::Underflow:
            log << "level generation stopped by binary64 underflow at J = "
                << res.achieved_levels << " (" << gen.note << ")\n";
            break;
        case LevelHalt::HorizonExhausted:
            log << "level generation exhausted the horizon at J = " << res.achieved_levels
                << " (" << gen.note << ");"
                << " a longer rate sequence admits deeper levels\n";
            break;
    }
    write_levels_csv(gen.levels, out / "levels.csv");

    if (gen.levels.size() < 2) {
        res.notes.push_back(
            "fewer than 2 levels were generated; the probe stages need J >= 2. "
            "Remedy: supply a longer horizon or a faster-decaying rate sequence.");
        log << res.notes.back() << "\n";
        CsvBuilder v;
        v.header({"conclusion", "verdict", "detail"});
        v.row({"levels", "fail", "fewer than 2 levels generated"});
        v.write(out / "verdicts.csv");
        return res;
    }
    validate_levels(gen.levels);
    log << "all per-level structural identities hold\n";

    // mixing bound over the full horizon
    BetaBoundReport bound = beta_bound_report(gen.levels, env, xi, cfg.horizon);
    {
        CsvBuilder csv;
        csv.header({"n", "beta_sum", "log_six_bound", "zeta", "xi"});
        for (const auto& r : bound.rows)
            csv.row({format_double(r.n), format_double(r.beta_sum),
                     format_double(r.log_six_bound), format_double(r.zeta),
                     format_double(r.xi)});
        csv.write(out / "beta_vs_zeta.csv");
    }
    res.verdicts[1] = bound.max_log_margin < 0.0;
    log << "mixing bound verified for every n <= " << bound.checked
        << " (worst log margin " << format_double(bound.max_log_margin) << ")\n";

    SuperposedConfig sc{gen.levels, cfg.master_seed, cfg.trials, cfg.horizon};

    // moments: empirical mean/variance of X_0 plus the exact second-moment cap
    {
        Rng rng(derive_seed(cfg.master_seed, 0xA11CEull));
        double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
        for (std::int64_t tr = 0; tr < cfg.trials; ++tr) {
            double x = 0.0;
            for (const auto& l : gen.levels) {
                double u = rng.uniform();
                double s = u < l.eps / 2.0 ? -1.0 : (u < l.eps ? 1.0 : 0.0);
                x += l.h * s;
            }
            sum += x;
            sum2 += x * x;
            sum4 += x * x * x * x;
        }
        double tn = static_cast<double>(cfg.trials);
        double mean = sum / tn;
        double var = sum2 / tn - mean * mean;
        double m4 = sum4 / tn;
        double se_mean = std::sqrt(std::max(var, 1e-300) / tn);
        double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / tn);
        double cap = 0.0, observable = 0.0;
        for (const auto& l : gen.levels) {
            cap += l.h * l.h * l.eps;
            if (tn * l.eps >= 25.0) observable += l.h * l.h * l.eps;
        }
        bool mean_ok = std::abs(mean) <= 3.0 * se_mean + 1e-12;
        bool var_ok = std::abs(var - observable) <= 4.0 * se_var + 1e-12;
        bool cap_ok = cap <= 1.0 + 1e-12;
        res.verdicts[0] = mean_ok && var_ok && cap_ok;
        CsvBuilder csv;
        csv.header({"quantity", "value"});
        csv.row({"empirical_mean", format_double(mean)});
        csv.row({"se_mean", format_double(se_mean)});
        csv.row({"empirical_var", format_double(var)});
        csv.row({"se_var", format_double(se_var)});
        csv.row({"resolvable_var", format_double(observable)});
        csv.row({"total_var", format_double(cap)});
        csv.write(out / "moments.csv");
        log << "moments: mean " << format_double(mean) << " (se " << format_double(se_mean)
            << "), var " << format_double(var) << " vs resolvable "
            << format_double(observable) << "; sum h^2 eps = " << format_double(cap)
            << "\n";
        if (observable < cap)
            res.notes.push_back(
                "levels that are not expected to leave state 0 even once across all "
                "trials are invisible to the empirical variance; their mass is covered "
                "by the exact cap sum h^2 eps <= 1.");
    }

    // dissipation probe
    {
        std::vector<double> n_list =
            cfg.n_list.empty() ? default_dissipation_windows(sc) : cfg.n_list;
        auto rows = dissipation_probe(sc, n_list, 2.0, cfg.trials,
                                      derive_seed(cfg.master_seed, 0xD155ull));
        CsvBuilder csv;
        csv.header({"n", "max_window_prob", "se", "trials"});
        bool mono = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            csv.row({format_double(rows[i].n), format_double(rows[i].max_window_prob),
                     format_double(rows[i].se), std::to_string(rows[i].trials)});
            if (i > 0) {
                double slack = 2.0 * std::sqrt(rows[i].se * rows[i].se +
                                               rows[i - 1].se * rows[i - 1].se);
                if (rows[i].max_window_prob > rows[i - 1].max_window_prob + slack)
                    mono = false;
            }
            log << "dissipation at n = " << format_double(rows[i].n) << ": "
                << format_double(rows[i].max_window_prob) << " (se "
                << format_double(rows[i].se) << ")\n";
        }
        csv.write(out / "dissipation.csv");
        res.verdicts[2] = mono && rows.size() >= 2;
    }

    // sublimit probe: single-level at each j, full chain where aggregation
    // stays exact
    SvgSeries sub_pts{"single-level CF distance", "#262", {}, {}};
    {
        auto grid = default_t_grid(cfg.t_max, cfg.t_step);
        CsvBuilder csv;
        csv.header({"j", "mode", "distance", "normalizer", "trials"});
        double d2 = -1.0, dlast = -1.0;
        int J = static_cast<int>(gen.levels.size());
        for (int j = 1; j <= J; ++j) {
            auto r = sublimit_probe(sc, j, grid, cfg.trials,
                                    derive_seed(cfg.master_seed, 0x51ull), false);
            csv.row({std::to_string(j), "single-level", format_double(r.distance),
                     format_double(r.normalizer), std::to_string(r.trials)});
            log << "sublimit single-level j = " << j << ": distance "
                << format_double(r.distance) << "\n";
            sub_pts.x.push_back(j);
            sub_pts.y.push_back(r.distance);
            if (j == 2) d2 = r.distance;
            if (j == J) dlast = r.distance;
            bool full_feasible = true;
            try {
                auto rf = sublimit_probe(sc, j, grid, cfg.trials,
                                         derive_seed(cfg.master_seed, 0xF0ull), true);
                csv.row({std::to_string(j), "full-chain", format_double(rf.distance),
                         format_double(rf.normalizer), std::to_string(rf.trials)});
                log << "sublimit full-chain j = " << j << ": distance "
                    << format_double(rf.distance) << "\n";
            } catch (const InvalidParams&) {
                full_feasible = false;
            }
            if (!full_feasible)
                csv.row({std::to_string(j), "full-chain", "infeasible", "", ""});
        }
        csv.write(out / "sublimit.csv");
        double noise = 2.0 * 2.0 / std::sqrt(static_cast<double>(cfg.trials));
        res.verdicts[3] = dlast >= 0.0 && d2 >= 0.0 && dlast < 0.05 && dlast < d2 + noise;
        res.notes.push_back(
            "the full-chain normalized sum carries the lower levels' variance "
            "(second moment ~ 2/j), so its CF distance has a floor at moderate j; "
            "the single-level form converges and carries the verdict.");
    }

    CsvBuilder v;
    v.header({"conclusion", "verdict", "detail"});
    const char* names[4] = {"moments", "mixing-bound", "dissipation", "sublimit"};
    for (int k = 0; k < 4; ++k)
        v.row({names[k], res.verdicts[static_cast<std::size_t>(k)] ? "pass" : "fail", ""});
    v.write(out / "verdicts.csv");

    if (cfg.emit_svg) {
        SvgSeries bnd{"log mixing bound", "#c22", {}, {}};
        SvgSeries rate{"log rate", "#26c", {}, {}};
        for (const auto& r : bound.rows) {
            bnd.x.push_back(r.n);
            bnd.y.push_back(r.log_six_bound);
            rate.x.push_back(r.n);
            rate.y.push_back(r.xi);
        }
        atomic_write_file(out / "beta_vs_zeta.svg",
                          render_line_plot("mixing bound vs prescribed rate", "n",
                                           "log scale", {bnd, rate}));
        atomic_write_file(out / "sublimit.svg",
                          render_line_plot("CF distance to the compound Poisson-Laplace law",
                                           "level j", "sup distance", {sub_pts}));
    }

    res.ok = res.verdicts[0] && res.verdicts[1] && res.verdicts[2] && res.verdicts[3];
    log << "overall: " << (res.ok ? "pass" : "FAIL") << "\n";
    return res;
}

}  // namespace revmix
