#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "revmix/envelope.hpp"
#include "revmix/errors.hpp"
#include "revmix/levels.hpp"
#include "revmix/rng.hpp"

using namespace revmix;

namespace {

Envelope stretched_env(std::int64_t horizon) {
    return build_envelope(stretched_exp_xi_fn(0.5), horizon);
}

}  // namespace

TEST_CASE("springboard constants") {
    LevelParams l0 = level_zero();
    CHECK(l0.j == 0);
    CHECK(l0.eps == doctest::Approx(1.0 / 9.0));
    CHECK(l0.theta == doctest::Approx(1.0 / 9.0));
    CHECK(l0.I == 1.0);
    CHECK(l0.h == 1.0);
}

TEST_CASE("first level from the springboard") {
    Envelope env = stretched_env(10000);
    std::vector<LevelParams> hist{level_zero()};
    LevelParams l1 = next_level(hist, env);
    CHECK(l1.j == 1);
    CHECK(l1.B == doctest::Approx(1.0).epsilon(1e-15));  // 1 * (1^2 * (1/9)/(1/9))
    CHECK(l1.eps_star == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
    CHECK(l1.eps < l1.eps_star);
    CHECK(l1.theta <= 1.0 / 18.0 + 1e-15);
    CHECK(l1.theta_star == doctest::Approx(l1.theta / (1.0 - l1.eps)).epsilon(1e-15));
    CHECK(l1.I >= 72.0);
    CHECK(l1.h == doctest::Approx(std::sqrt(l1.B * l1.theta / l1.eps)).epsilon(1e-12));
}

TEST_CASE("generated levels pass every structural identity") {
    Envelope env = stretched_env(10000);
    auto gen = generate_levels(env);
    CHECK(gen.levels.size() == 3);  // horizon 10^4 admits exactly three levels
    CHECK(gen.halt == LevelHalt::HorizonExhausted);
    CHECK_NOTHROW(validate_levels(gen.levels));

    for (std::size_t u = 0; u < gen.levels.size(); ++u) {
        const LevelParams& l = gen.levels[u];
        double eps_prev = u == 0 ? level_zero().eps : gen.levels[u - 1].eps;
        double theta_prev = u == 0 ? level_zero().theta : gen.levels[u - 1].theta;
        CHECK(l.eps < l.eps_star);
        CHECK(l.eps_star <= eps_prev / 2.0 * (1.0 + 1e-15));
        CHECK(l.theta <= std::min(theta_prev / 2.0, std::pow(2.0, -l.j) / l.B) *
                             (1.0 + 1e-15));
        CHECK(l.eps <= std::pow(9.0, -l.j) * (1.0 + 1e-15));
        double prod = l.theta_star * l.eps * l.I;
        CHECK(prod <= 1.0 + 1e-9);
        CHECK(prod > 1.0 - l.theta_star * l.eps - 1e-9);
    }

    // partial sums of h^2 eps stay below 1 - 2^-J
    double acc = 0.0;
    for (const auto& l : gen.levels) {
        acc += l.h * l.h * l.eps;
        CHECK(acc <= 1.0 - std::pow(2.0, -l.j) + 1e-12);
    }
}

TEST_CASE("deeper horizon reaches a fourth level") {
    Envelope env = stretched_env(1000000);
    auto gen = generate_levels(env);
    CHECK(gen.levels.size() == 4);
    CHECK_NOTHROW(validate_levels(gen.levels));
    // matches the independently computed trajectory
    CHECK(gen.levels[0].I == doctest::Approx(33080.0));
    CHECK(gen.levels[1].I == doctest::Approx(8677376053.0));
    CHECK(gen.levels[2].theta == doctest::Approx(0.0069441095787681206).epsilon(1e-12));
    CHECK(gen.levels[3].eps == doctest::Approx(4.2177552009111479e-170).epsilon(1e-10));
}

TEST_CASE("level generation is deterministic") {
    Envelope env = stretched_env(10000);
    auto a = generate_levels(env);
    auto b = generate_levels(env);
    REQUIRE(a.levels.size() == b.levels.size());
    for (std::size_t u = 0; u < a.levels.size(); ++u) {
        CHECK(a.levels[u].eps == b.levels[u].eps);
        CHECK(a.levels[u].theta == b.levels[u].theta);
        CHECK(a.levels[u].I == b.levels[u].I);
        CHECK(a.levels[u].h == b.levels[u].h);
        CHECK(a.levels[u].t == b.levels[u].t);
    }
}

TEST_CASE("theta over h decreases toward zero") {
    Envelope env = stretched_env(1000000);
    auto gen = generate_levels(env);
    double prev = level_zero().theta / level_zero().h;
    for (const auto& l : gen.levels) {
        double cur = l.theta / l.h;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("corrupted levels are rejected with a named violation") {
    Envelope env = stretched_env(10000);
    auto gen = generate_levels(env);
    REQUIRE(gen.levels.size() >= 2);

    auto bad = gen.levels;
    bad[1].h = 2.0 * gen.levels[0].h;  // breaks the factor-3 growth
    try {
        validate_levels(bad);
        FAIL("expected a validation failure");
    } catch (const ValidationFailure& e) {
        CHECK(std::string(e.what()).find("h") != std::string::npos);
        CHECK(std::string(e.what()).find("level 2") != std::string::npos);
    }

    auto bad2 = gen.levels;
    bad2[2].eps = bad2[1].eps;  // breaks the strict halving
    CHECK_THROWS_AS(validate_levels(bad2), ValidationFailure);
}

TEST_CASE("explicit level targets propagate horizon failures") {
    Envelope env = stretched_env(2000);
    CHECK_THROWS_AS(generate_levels(env, 5), HorizonTooSmall);
    auto gen = generate_levels(env, 2);
    CHECK(gen.halt == LevelHalt::TargetReached);
    CHECK(gen.levels.size() == 2);
}

TEST_CASE("underflow halts generation gracefully") {
    // a nearly flat tail after a deep drop forces exp(log eps) below binary64
    auto xi = [](std::int64_t n) {
        return n == 1 ? -700.0 : -700.0 - 1e-6 * static_cast<double>(n - 1);
    };
    Envelope env = build_envelope(xi, 200);
    auto gen = generate_levels(env);
    CHECK(gen.levels.empty());
    CHECK(gen.halt == LevelHalt::Underflow);
    CHECK(!gen.note.empty());
}

TEST_CASE("random admissible rate sequences generate valid levels") {
    // decreasing log-rates with random curvature; every generated list must
    // pass the full structural validation, whatever depth is reached
    Rng rng(808);
    int nonempty = 0;
    for (int rep = 0; rep < 30; ++rep) {
        double level = 0.0;
        double power = 0.35 + 0.4 * rng.uniform();
        double scale = 0.5 + 2.0 * rng.uniform();
        std::vector<double> xi(20000);
        for (std::size_t n = 0; n < xi.size(); ++n) {
            double base = -scale * std::pow(static_cast<double>(n + 1), power);
            level = std::min(level - 1e-9, base * (1.0 + 0.05 * rng.uniform()));
            xi[n] = level;
        }
        Envelope env = build_envelope(xi);
        auto gen = generate_levels(env);
        CHECK_NOTHROW(validate_levels(gen.levels));
        if (!gen.levels.empty()) ++nonempty;
    }
    CHECK(nonempty > 0);
}

TEST_CASE("poly-log rates admit no level at desk scale") {
    // the first level needs a hull slope of at most 1/18 in magnitude, which
    // the poly-log rates only reach near n = 2.4e7; the tangent intercept
    // there is ~ -8e4, far below what binary64 can exponentiate
    Envelope env = build_envelope(poly_log_xi_fn(), 200000);
    auto gen = generate_levels(env);
    CHECK(gen.levels.empty());
    CHECK(gen.halt == LevelHalt::HorizonExhausted);
}
