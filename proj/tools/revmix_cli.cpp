// Command-line front door: builds the prescribed-rate construction, runs the
// verification probes, and writes CSV (optionally SVG) reports.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "revmix/block.hpp"
#include "revmix/coding.hpp"
#include "revmix/csv.hpp"
#include "revmix/envelope.hpp"
#include "revmix/errors.hpp"
#include "revmix/excursion.hpp"
#include "revmix/levels.hpp"
#include "revmix/mixing.hpp"
#include "revmix/rng.hpp"
#include "revmix/runner.hpp"
#include "revmix/superposed.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("REVMIX_OUT");
    return env && *env ? env : "revmix-out";
}

revmix::Envelope envelope_from(const revmix::ExperimentConfig& cfg) {
    auto xi = cfg.xi_fn();
    return revmix::build_envelope(xi, cfg.horizon);
}

void add_rate_options(CLI::App* app, revmix::ExperimentConfig& cfg) {
    app->add_option("--preset", cfg.rate_source,
                    "rate preset: stretched-exp or poly-log (or 'file')");
    app->add_option("--alpha", cfg.alpha, "stretched-exp exponent in (0,1)");
    app->add_option("--rates", cfg.rates_file, "one-column file of zeta_n values");
    app->add_option("--horizon", cfg.horizon, "rate horizon N");
    app->add_option("--out", cfg.out_dir, "output directory");
}

int cmd_block(double eps, double theta, std::int64_t n_max, std::uint64_t seed,
              std::int64_t harvest, const std::string& out) {
    auto res = revmix::run_block(eps, theta, n_max, out, seed, harvest, std::cout);
    return res.ok ? 0 : 1;
}

int cmd_envelope(const revmix::ExperimentConfig& cfg) {
    auto zeta = cfg.zeta_fn();
    if (cfg.rate_source == "file") {
        auto rates = revmix::RateSequence::from_file(cfg.rates_file);
        for (const auto& w : rates.trend_warnings())
            std::cout << "warning: " << w << "\n";
    }
    auto env = envelope_from(cfg);
    revmix::CsvBuilder csv;
    csv.header({"x", "phi", "slope_right"});
    for (std::size_t i = 0; i + 1 < env.segment_count() + 1; ++i)
        csv.row({revmix::format_double(env.breakpoint_x(i)),
                 revmix::format_double(env.breakpoint_y(i)),
                 i < env.segment_count() ? revmix::format_double(env.slope(i)) : ""});
    csv.row({revmix::format_double(env.breakpoint_x(env.segment_count())),
             revmix::format_double(env.breakpoint_y(env.segment_count())), ""});
    csv.write(std::filesystem::path(cfg.out_dir) / "envelope.csv");
    std::cout << "envelope: " << env.segment_count() << " segments, steepest slope "
              << revmix::format_double(env.min_slope()) << ", horizon "
              << revmix::format_double(env.x_max()) << "\n";
    return 0;
}

int cmd_levels(const revmix::ExperimentConfig& cfg) {
    auto env = envelope_from(cfg);
    auto gen = revmix::generate_levels(env, cfg.max_levels);
    revmix::validate_levels(gen.levels);
    revmix::CsvBuilder csv;
    csv.header({"j", "B", "eps_star", "t", "eps", "theta", "theta_star", "I", "h"});
    for (const auto& l : gen.levels)
        csv.row({std::to_string(l.j), revmix::format_double(l.B),
                 revmix::format_double(l.eps_star), revmix::format_double(l.t),
                 revmix::format_double(l.eps), revmix::format_double(l.theta),
                 revmix::format_double(l.theta_star), revmix::format_double(l.I),
                 revmix::format_double(l.h)});
    csv.write(std::filesystem::path(cfg.out_dir) / "levels.csv");
    std::cout << "generated " << gen.levels.size() << " levels";
    if (!gen.note.empty()) std::cout << " (" << gen.note << ")";
    std::cout << "\n";
    return gen.levels.empty() ? 1 : 0;
}

int cmd_simulate(const revmix::ExperimentConfig& cfg, std::int64_t length) {
    auto env = envelope_from(cfg);
    auto gen = revmix::generate_levels(env, cfg.max_levels);
    if (gen.levels.empty()) {
        std::cout << "no levels generated (" << gen.note << ")\n";
        return 1;
    }
    revmix::SuperposedConfig sc{gen.levels, cfg.master_seed, cfg.trials, length};
    auto s = revmix::sample(sc, length, cfg.master_seed);
    revmix::CsvBuilder csv;
    std::vector<std::string> head{"k"};
    for (std::size_t u = 0; u < gen.levels.size(); ++u)
        head.push_back("level" + std::to_string(u + 1));
    head.push_back("combined");
    csv.header(head);
    for (std::int64_t k = 0; k < length; ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (const auto& path : s.level_paths)
            row.push_back(std::to_string(static_cast<int>(path[static_cast<std::size_t>(k)])));
        row.push_back(revmix::format_double(s.combined[static_cast<std::size_t>(k)]));
        csv.row(row);
    }
    csv.write(std::filesystem::path(cfg.out_dir) / "path.csv");
    std::cout << "wrote a " << length << "-step path over " << gen.levels.size()
              << " levels\n";
    return 0;
}

int cmd_appendix(std::size_t states, double g1, std::uint64_t seed, std::int64_t samples,
                 const std::string& out) {
    using namespace revmix;
    double p = choose_p(g1);
    CodingSpec spec = random_spec(states, p, seed);
    auto inj = injectivity_check(spec);
    std::cout << "p = " << format_double(p) << " (binary entropy "
              << format_double(binary_entropy(p)) << " <= " << format_double(g1 / 2.0)
              << "); injective: " << (inj.injective ? "yes" : "NO") << "\n";

    // default illustrative base chain: the 3-state block at eps = theta = 1/9
    BlockParams bp(1.0 / 9.0, 1.0 / 9.0);
    CodingSpec block_spec = random_spec(3, p, derive_seed(seed, 7));
    block_spec.base_states = {"-1", "0", "1"};
    block_spec.f_values = {-1.0, 0.0, 1.0};
    auto rep = coding_info_report(lag_joint(bp, 1), block_spec);
    std::cout << "base info " << format_double(rep.base_info) << ", coded info "
              << format_double(rep.coded_info) << "\n";
    std::cout << "base entropy " << format_double(rep.base_entropy) << " + eta entropy "
              << format_double(rep.eta_entropy) << " = coded entropy "
              << format_double(rep.coded_entropy) << "\n";

    auto path = sample_path(bp, samples, derive_seed(seed, 1));
    std::vector<std::size_t> idx(path.size());
    for (std::size_t k = 0; k < path.size(); ++k)
        idx[k] = static_cast<std::size_t>(path[k] + 1);
    auto coded = code_path(block_spec, idx, derive_seed(seed, 2));
    CsvBuilder csv;
    csv.header({"k", "base", "coded"});
    for (std::size_t k = 0; k < coded.size(); ++k)
        csv.row({std::to_string(k), std::to_string(static_cast<int>(path[k])),
                 format_double(coded[k])});
    csv.write(std::filesystem::path(out) / "coded_path.csv");

    bool ok = inj.injective &&
              std::abs(rep.coded_info - rep.base_info) <= 1e-10 &&
              std::abs(rep.coded_entropy - (rep.base_entropy + rep.eta_entropy)) <= 1e-12;
    std::cout << (ok ? "appendix checks passed" : "appendix checks FAILED") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and verification of reversible chains with prescribed "
                 "subexponential mixing rates"};
    app.require_subcommand(1);

    revmix::ExperimentConfig cfg;
    cfg.out_dir = default_out_dir();

    // block
    double eps = 1.0 / 9.0, theta = 1.0 / 9.0;
    std::int64_t n_max = 100, harvest = 20000;
    std::uint64_t seed = 1;
    std::string out = cfg.out_dir;
    auto* block = app.add_subcommand("block", "one building-block chain: matrices and checks");
    block->add_option("--epsilon", eps, "epsilon in (0, 1/9]");
    block->add_option("--theta", theta, "theta in (0, 1/9]");
    block->add_option("--n-max", n_max, "largest lag n");
    block->add_option("--seed", seed, "rng seed");
    block->add_option("--wlaw-harvest", harvest, "excursion sums to harvest (0 = skip)");
    block->add_option("--out", out, "output directory");

    auto* envelope = app.add_subcommand("envelope", "convex minorant of the log rates");
    add_rate_options(envelope, cfg);

    auto* levels = app.add_subcommand("levels", "per-level parameter recursion");
    add_rate_options(levels, cfg);
    levels->add_option("--max-levels", cfg.max_levels, "level target (-1 = auto-max)");

    std::int64_t sim_length = 4096;
    auto* simulate = app.add_subcommand("simulate", "sample the superposed chain");
    add_rate_options(simulate, cfg);
    simulate->add_option("--max-levels", cfg.max_levels, "level target (-1 = auto-max)");
    simulate->add_option("--length", sim_length, "path length");
    simulate->add_option("--seed", cfg.master_seed, "master seed");

    std::string config_file;
    bool quick = false, full = false;
    auto* verify = app.add_subcommand(
        "verify", "end-to-end run: envelope, levels, mixing bound, probes, verdicts");
    add_rate_options(verify, cfg);
    verify->add_option("--config", config_file, "JSON config file (flags override)");
    verify->add_option("--max-levels", cfg.max_levels, "level target (-1 = auto-max)");
    verify->add_option("--seed", cfg.master_seed, "master seed");
    verify->add_option("--trials", cfg.trials, "Monte Carlo trials per probe");
    verify->add_flag("--quick", quick, "quick profile: trials 10^4, horizon 10^3");
    verify->add_flag("--full", full, "full profile: trials 10^5, horizon 10^4");
    verify->add_flag("--svg", cfg.emit_svg, "also render SVG plots");

    std::size_t coding_states = 50;
    double g1 = 1.0;
    std::int64_t coding_samples = 4096;
    auto* appendix = app.add_subcommand("appendix", "injective perturbation coding demo");
    appendix->add_option("--states", coding_states, "base state count");
    appendix->add_option("--g1", g1, "information budget g1 in (0, 1]");
    appendix->add_option("--seed", seed, "rng seed");
    appendix->add_option("--samples", coding_samples, "coded path length");
    appendix->add_option("--out", out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (block->parsed()) return cmd_block(eps, theta, n_max, seed, harvest, out);
        if (envelope->parsed()) return cmd_envelope(cfg);
        if (levels->parsed()) return cmd_levels(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg, sim_length);
        if (verify->parsed()) {
            revmix::ExperimentConfig run_cfg = cfg;
            if (!config_file.empty()) {
                run_cfg = revmix::ExperimentConfig::from_json_file(config_file);
                // flags override file values where explicitly given
                for (const auto* opt : verify->get_options())
                    if (opt->count() > 0) {
                        const std::string& n = opt->get_name();
                        if (n == "--preset") run_cfg.rate_source = cfg.rate_source;
                        if (n == "--alpha") run_cfg.alpha = cfg.alpha;
                        if (n == "--rates") run_cfg.rates_file = cfg.rates_file;
                        if (n == "--horizon") run_cfg.horizon = cfg.horizon;
                        if (n == "--out") run_cfg.out_dir = cfg.out_dir;
                        if (n == "--max-levels") run_cfg.max_levels = cfg.max_levels;
                        if (n == "--seed") run_cfg.master_seed = cfg.master_seed;
                        if (n == "--trials") run_cfg.trials = cfg.trials;
                        if (n == "--svg") run_cfg.emit_svg = cfg.emit_svg;
                    }
            }
            if (quick) run_cfg.apply_quick_profile();
            if (full) run_cfg.apply_full_profile();
            auto res = revmix::run_full(run_cfg, std::cout);
            return res.ok ? 0 : 1;
        }
        if (appendix->parsed())
            return cmd_appendix(coding_states, g1, seed, coding_samples, out);
    } catch (const revmix::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
