#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "revmix/block.hpp"
#include "revmix/errors.hpp"
#include "revmix/mixing.hpp"
#include "test_util.hpp"

using namespace revmix;
using namespace revmix::mixing;

namespace {

FiniteJoint diag_half() {
    return FiniteJoint({"a", "b"}, {"x", "y"}, {0.5, 0.0, 0.0, 0.5});
}

// maximal correlation of a 2x2 table in closed form: the phi coefficient
double rho_2x2_oracle(const FiniteJoint& j) {
    auto r = j.row_marginal();
    auto c = j.col_marginal();
    return std::abs(j.at(1, 1) - r[1] * c[1]) / std::sqrt(r[0] * r[1] * c[0] * c[1]);
}

// angle search over standardized score functions for a 3x3 table
double rho_3x3_oracle(const FiniteJoint& j) {
    auto r = j.row_marginal();
    auto c = j.col_marginal();
    // orthonormal mean-zero bases under the weighted inner products
    auto basis = [](const std::vector<double>& w) {
        // two vectors spanning {f : sum w_i f_i = 0}, orthonormal w.r.t. w
        std::vector<std::array<double, 3>> b;
        std::array<double, 3> e1{1.0, -w[0] / w[1], 0.0};
        double n1 = std::sqrt(w[0] * e1[0] * e1[0] + w[1] * e1[1] * e1[1]);
        for (auto& x : e1) x /= n1;
        std::array<double, 3> e2{1.0, 1.0, 0.0};
        // Gram-Schmidt a third direction against e1
        std::array<double, 3> t{0.0, 0.0, 1.0};
        double proj = w[2] * t[2] * 0.0;
        for (int i = 0; i < 3; ++i) proj += w[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)] * e1[static_cast<std::size_t>(i)];
        for (int i = 0; i < 3; ++i) e2[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] - proj * e1[static_cast<std::size_t>(i)];
        double m = 0.0;
        for (int i = 0; i < 3; ++i) m += w[static_cast<std::size_t>(i)] * e2[static_cast<std::size_t>(i)];
        // remove the mean, then normalize
        for (int i = 0; i < 3; ++i) e2[static_cast<std::size_t>(i)] -= m;
        double n2 = 0.0;
        for (int i = 0; i < 3; ++i) n2 += w[static_cast<std::size_t>(i)] * e2[static_cast<std::size_t>(i)] * e2[static_cast<std::size_t>(i)];
        n2 = std::sqrt(n2);
        for (auto& x : e2) x /= n2;
        b.push_back(e1);
        b.push_back(e2);
        return b;
    };
    auto rb = basis(r);
    auto cb = basis(c);
    double best = 0.0;
    const int steps = 720;
    for (int a = 0; a < steps; ++a) {
        double fa = 2.0 * M_PI * a / steps;
        std::array<double, 3> f{};
        for (int i = 0; i < 3; ++i)
            f[static_cast<std::size_t>(i)] = std::cos(fa) * rb[0][static_cast<std::size_t>(i)] +
                                             std::sin(fa) * rb[1][static_cast<std::size_t>(i)];
        for (int b2 = 0; b2 < steps; ++b2) {
            double gb = 2.0 * M_PI * b2 / steps;
            std::array<double, 3> g{};
            for (int i = 0; i < 3; ++i)
                g[static_cast<std::size_t>(i)] = std::cos(gb) * cb[0][static_cast<std::size_t>(i)] +
                                                 std::sin(gb) * cb[1][static_cast<std::size_t>(i)];
            double corr = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k)
                    corr += j.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) *
                            f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k)];
            best = std::max(best, std::abs(corr));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("alpha on anchor joints") {
    Rng rng(11);
    auto prod = FiniteJoint::product(testutil::random_pmf(rng, 4), testutil::random_pmf(rng, 3));
    CHECK(alpha_coefficient(prod) <= 1e-12);

    CHECK(alpha_coefficient(diag_half()) == doctest::Approx(0.25));

    BlockParams bp(1.0 / 9.0, 1.0 / 9.0);
    auto joint = lag_joint(bp, 1);
    double a = alpha_coefficient(joint);
    double b = beta_coefficient(joint);
    CHECK(2.0 * a <= b + 1e-12);
    CHECK(a > 0.0);
}

TEST_CASE("alpha rejects oversized tables") {
    std::vector<std::string> states(17);
    for (std::size_t i = 0; i < 17; ++i) states[i] = std::to_string(i);
    std::vector<double> p(17 * 17, 1.0 / (17.0 * 17.0));
    FiniteJoint big(states, states, p);
    CHECK_THROWS_AS(alpha_coefficient(big), StateSpaceTooLarge);
}

TEST_CASE("beta on anchor joints") {
    Rng rng(12);
    auto prod = FiniteJoint::product(testutil::random_pmf(rng, 3), testutil::random_pmf(rng, 5));
    CHECK(beta_coefficient(prod) <= 1e-12);
    CHECK(beta_coefficient(diag_half()) == doctest::Approx(0.5));

    BlockParams bp(1.0 / 13.0, 1.0 / 11.0);
    for (std::int64_t n : {1, 2, 5, 20}) {
        double bound = 6.0 * bp.epsilon * std::pow(1.0 - bp.theta, static_cast<double>(n));
        CHECK(beta_n_exact(bp, n) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("rho matches closed-form and search oracles") {
    Rng rng(13);
    auto prod = FiniteJoint::product(testutil::random_pmf(rng, 3), testutil::random_pmf(rng, 3));
    CHECK(rho_coefficient(prod) <= 1e-10);

    for (int rep = 0; rep < 40; ++rep) {
        auto j = testutil::random_joint(rng, 2);
        CHECK(rho_coefficient(j) == doctest::Approx(rho_2x2_oracle(j)).epsilon(1e-9));
    }
    for (int rep = 0; rep < 4; ++rep) {
        auto j = testutil::random_joint(rng, 3);
        if (j.rows() != 3 || j.cols() != 3) continue;
        double svd = rho_coefficient(j);
        double grid = rho_3x3_oracle(j);
        CHECK(grid <= svd + 1e-9);           // grid search cannot beat the true maximum
        CHECK(svd <= grid + 2e-4);           // and reaches it up to grid resolution
    }
}

TEST_CASE("rho rejects degenerate marginals") {
    FiniteJoint j({"a", "b"}, {"x", "y"}, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(rho_coefficient(j), DegenerateMarginal);
}

TEST_CASE("rho submultiplicative along the block chain") {
    BlockParams bp(1.0 / 9.0, 1.0 / 12.0);
    for (auto [m, n] : {std::pair<int, int>{1, 1}, {1, 3}, {2, 5}, {4, 4}}) {
        double rm = rho_coefficient(lag_joint(bp, m));
        double rn = rho_coefficient(lag_joint(bp, n));
        double rmn = rho_coefficient(lag_joint(bp, m + n));
        CHECK(rmn <= rm * rn + 1e-9);
    }
}

TEST_CASE("information and entropy anchors") {
    Rng rng(14);
    auto prod = FiniteJoint::product(testutil::random_pmf(rng, 4), testutil::random_pmf(rng, 4));
    CHECK(info_coefficient(prod) <= 1e-12);

    DiscretePmf point{{"a"}, {1.0}};
    CHECK(entropy(point) == 0.0);
    DiscretePmf uni2{{"a", "b"}, {0.5, 0.5}};
    CHECK(entropy(uni2) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("additivity over independent products") {
    Rng rng(15);
    for (int rep = 0; rep < 20; ++rep) {
        auto a = testutil::random_joint(rng, 4);
        auto b = testutil::random_joint(rng, 3);
        auto t = FiniteJoint::tensor(a, b);
        CHECK(info_coefficient(t) ==
              doctest::Approx(info_coefficient(a) + info_coefficient(b)).epsilon(1e-10));

        auto pa = testutil::random_pmf(rng, 5);
        auto pb = testutil::random_pmf(rng, 3);
        CHECK(entropy(DiscretePmf::product(pa, pb)) ==
              doctest::Approx(entropy(pa) + entropy(pb)).epsilon(1e-12));
    }
}

TEST_CASE("coefficient inequalities on random joints") {
    Rng rng(16);
    for (int rep = 0; rep < 120; ++rep) {
        auto j = testutil::random_joint(rng, 8);
        double a = alpha_coefficient(j);
        double b = beta_coefficient(j);
        double r = rho_coefficient(j);
        double i = info_coefficient(j);
        CHECK(a >= 0.0);
        CHECK(a <= 0.25 + 1e-12);
        CHECK(2.0 * a <= b + 1e-10);
        CHECK(b <= 1.0 + 1e-12);
        CHECK(4.0 * a <= r + 1e-10);
        CHECK(r <= 1.0 + 1e-12);
        CHECK(b <= std::sqrt(i) + 1e-10);
    }
}

TEST_CASE("joint csv round trip") {
    Rng rng(77);
    auto j = testutil::random_joint(rng, 5);
    std::ostringstream os;
    j.to_csv(os);
    std::istringstream is(os.str());
    auto back = FiniteJoint::from_csv(is);
    REQUIRE(back.rows() == j.rows());
    REQUIRE(back.cols() == j.cols());
    CHECK(back.row_states() == j.row_states());
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b)
            CHECK(back.at(a, b) == j.at(a, b));  // %.17g round-trips binary64
}

TEST_CASE("coefficients vanish only on product joints") {
    // a joint differing from its marginal product by a visible margin
    FiniteJoint j({"a", "b"}, {"x", "y"}, {0.3, 0.2, 0.2, 0.3});
    CHECK(alpha_coefficient(j) > 1e-6);
    CHECK(beta_coefficient(j) > 1e-6);
    CHECK(rho_coefficient(j) > 1e-6);
    CHECK(info_coefficient(j) > 1e-6);
}
