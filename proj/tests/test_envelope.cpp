#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "revmix/envelope.hpp"
#include "revmix/errors.hpp"
#include "revmix/rng.hpp"

using namespace revmix;

namespace {

std::vector<double> sqrt_xi(std::int64_t n_max) {
    std::vector<double> xi;
    for (std::int64_t n = 1; n <= n_max; ++n)
        xi.push_back(-std::sqrt(static_cast<double>(n)));
    return xi;
}

// brute-force minorant: the sup over all admissible lines through pairs of
// the points {(0,0)} union {(n, xi_n)}
double minorant_oracle(const std::vector<double>& xi, double x) {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    for (std::size_t i = 0; i < xi.size(); ++i)
        pts.emplace_back(static_cast<double>(i + 1), xi[i]);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            double slope = (pts[b].second - pts[a].second) / (pts[b].first - pts[a].first);
            double q = pts[a].second - slope * pts[a].first;
            if (!(slope < 0.0) || q > 1e-12) continue;
            bool below = true;
            for (const auto& pt : pts)
                if (q + slope * pt.first > pt.second + 1e-12) {
                    below = false;
                    break;
                }
            if (below) best = std::max(best, q + slope * x);
        }
    return best;
}

}  // namespace

TEST_CASE("log rates") {
    RateSequence r = RateSequence::stretched_exp(0.5, 200);
    auto xi = log_rates(r);
    for (std::int64_t n = 1; n <= 200; ++n)
        CHECK(xi[static_cast<std::size_t>(n - 1)] ==
              doctest::Approx(-std::sqrt(static_cast<double>(n))).epsilon(1e-12));

    RateSequence half{std::vector<double>{0.5}};
    CHECK(log_rates(half)[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-15));

    RateSequence poly;
    for (std::int64_t n = 1; n <= 50; ++n)
        poly.values.push_back(0.5 / static_cast<double>(n * n));
    auto xp = log_rates(poly);
    for (std::int64_t n = 1; n <= 50; ++n)
        CHECK(xp[static_cast<std::size_t>(n - 1)] ==
              doctest::Approx(-2.0 * std::log(static_cast<double>(n)) - std::log(2.0))
                  .epsilon(1e-12));

    RateSequence bad{std::vector<double>{0.5, 1.0, 0.2}};
    CHECK_THROWS_AS(log_rates(bad), RateOutOfRange);
    RateSequence bad2{std::vector<double>{0.5, -0.1}};
    CHECK_THROWS_AS(log_rates(bad2), RateOutOfRange);
}

TEST_CASE("hull of convex data interpolates the points") {
    auto xi = sqrt_xi(100);
    Envelope env = build_envelope(xi);
    CHECK(env.value(0.0) == 0.0);
    CHECK(env.value(100.0) == doctest::Approx(-10.0).epsilon(1e-14));
    for (std::int64_t n = 1; n <= 100; ++n) {
        double v = env.value(static_cast<double>(n));
        double x = xi[static_cast<std::size_t>(n - 1)];
        CHECK(v <= x + 1e-12);
        CHECK(v == doctest::Approx(x).epsilon(1e-12));  // convex data is its own hull
    }
}

TEST_CASE("hull equals the admissible-line supremum") {
    Rng rng(31);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<double> xi;
        double drift = -0.2 - rng.uniform();
        double level = 0.0;
        for (int n = 1; n <= 40; ++n) {
            level += drift * rng.uniform_pos();
            xi.push_back(level - 0.5 * rng.uniform());
        }
        Envelope env = build_envelope(xi);
        for (double x = 0.0; x <= env.x_max(); x += 0.5)
            CHECK(env.value(x) == doctest::Approx(minorant_oracle(xi, x)).epsilon(1e-9));
    }
}

TEST_CASE("hull structure invariants") {
    auto xi = sqrt_xi(1000);
    Envelope env = build_envelope(xi);
    CHECK(env.breakpoint_x(0) == 0.0);
    CHECK(env.breakpoint_y(0) == 0.0);
    double r = -1.0;  // min over n of xi_n / n for -sqrt data is at n = 1
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < env.segment_count(); ++i) {
        CHECK(env.slope(i) < 0.0);
        CHECK(env.slope(i) >= prev);
        CHECK(env.slope(i) >= r - 1e-15);
        prev = env.slope(i);
    }
    CHECK(env.min_slope() == doctest::Approx(r).epsilon(1e-15));
    // exp(phi(n)) <= zeta_n
    for (std::int64_t n = 1; n <= 1000; ++n)
        CHECK(std::exp(env.value(static_cast<double>(n))) <=
              std::exp(xi[static_cast<std::size_t>(n - 1)]) * (1.0 + 1e-12));
}

TEST_CASE("sampled admissible lines stay below the hull") {
    auto xi = sqrt_xi(500);
    Envelope env = build_envelope(xi);
    Rng rng(32);
    double r = env.min_slope();
    int accepted = 0;
    while (accepted < 1000) {
        double slope = r * rng.uniform_pos();
        double q = -3.0 * rng.uniform();
        bool admissible = true;
        for (std::int64_t n = 1; n <= 500; ++n)
            if (q + slope * static_cast<double>(n) > xi[static_cast<std::size_t>(n - 1)]) {
                admissible = false;
                break;
            }
        if (!admissible) continue;
        ++accepted;
        for (double x = 0.0; x <= 500.0; x += 7.3)
            CHECK(q + slope * x <= env.value(x) + 1e-9);
    }
}

TEST_CASE("tangent selection") {
    auto xi = sqrt_xi(400);
    Envelope env = build_envelope(xi);

    Tangent tg = tangent_select(env, -1.0, 1.0);
    CHECK(tg.slope >= -1.0);
    CHECK(tg.slope < 0.0);
    CHECK(tg.intercept <= -1.0);
    // tangency: the line touches the hull at t and stays below everywhere
    CHECK(tg.intercept + tg.slope * tg.t == doctest::Approx(env.value(tg.t)).epsilon(1e-12));
    for (double x = 0.0; x <= 400.0; x += 3.7)
        CHECK(tg.intercept + tg.slope * x <= env.value(x) + 1e-12);
    // t avoids the kinks: strictly inside a segment
    CHECK(tg.t > env.breakpoint_x(tg.segment));
    CHECK(tg.t < env.breakpoint_x(tg.segment + 1));

    // first-fit: the hull's leading segment runs through (0,0), so its line
    // has value 0 at x = 0 and can never meet a negative D; with a permissive
    // slope budget the second segment is the leftmost qualifying one
    Tangent first = tangent_select(env, -0.5, 1e9);
    CHECK(first.segment == 1);
    CHECK(first.t == doctest::Approx(1.5));

    // shrinking s moves the tangent point (weakly) rightward
    double prev_t = 0.0;
    for (double s : {1.0, 0.5, 0.1, 0.05}) {
        Tangent t2 = tangent_select(env, -1.0, s);
        CHECK(t2.t >= prev_t);
        prev_t = t2.t;
    }

    CHECK_THROWS_AS(tangent_select(env, -1e6, 1.0), HorizonTooSmall);
    Envelope tiny = build_envelope(sqrt_xi(10));
    CHECK_THROWS_AS(tangent_select(tiny, -5.0, 1.0), HorizonTooSmall);
}

TEST_CASE("presets satisfy the rate requirements") {
    RateSequence se = RateSequence::stretched_exp(0.5, 2000);
    RateSequence pl = RateSequence::poly_log(2000);
    se.validate();
    pl.validate();
    CHECK(se.trend_warnings().empty());
    // analytic and stored log-rates agree
    auto sefn = stretched_exp_xi_fn(0.5);
    auto plfn = poly_log_xi_fn();
    for (std::int64_t n : {1, 10, 500, 2000}) {
        CHECK(std::log(se.zeta(n)) == doctest::Approx(sefn(n)).epsilon(1e-12));
        CHECK(std::log(pl.zeta(n)) == doctest::Approx(plfn(n)).epsilon(1e-12));
    }
}

TEST_CASE("rates load from a one-column file") {
    auto path = std::filesystem::temp_directory_path() / "revmix-rates.txt";
    {
        std::ofstream os(path);
        for (int n = 1; n <= 64; ++n) os << std::exp(-std::sqrt(n)) << "\n";
    }
    RateSequence r = RateSequence::from_file(path.string());
    CHECK(r.horizon() == 64);
    CHECK(r.zeta(1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    Envelope env = build_envelope(log_rates(r));
    CHECK(env.value(0.0) == 0.0);
}

TEST_CASE("trend heuristic warns but does not throw") {
    RateSequence flat;
    for (int n = 0; n < 100; ++n) flat.values.push_back(0.4);
    flat.validate();
    CHECK(!flat.trend_warnings().empty());
}

TEST_CASE("degenerate envelopes are rejected") {
    std::vector<double> rising{-5.0, -0.1};
    Envelope env = build_envelope(rising);  // truncated after the falling part
    CHECK(env.x_max() == 1.0);
    CHECK(env.segment_count() == 1);
    CHECK_THROWS_AS(env.value(1.5), InvalidParams);
}
