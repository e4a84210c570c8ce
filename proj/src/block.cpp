#include "revmix/block.hpp"

#include <algorithm>
#include <cmath>

#include "revmix/errors.hpp"
#include "revmix/mixing.hpp"
#include "revmix/rng.hpp"

namespace revmix {

BlockParams::BlockParams(double eps, double th) : epsilon(eps), theta(th) {
    if (!(eps > 0.0) || !(eps <= 1.0 / 9.0))
        throw InvalidParams("block: epsilon must lie in (0, 1/9]");
    if (!(th > 0.0) || !(th <= 1.0 / 9.0))
        throw InvalidParams("block: theta must lie in (0, 1/9]");
    theta_star = th / (1.0 - eps);
}

Matrix3 Matrix3::identity() {
    Matrix3 m;
    m.at(-1, -1) = m.at(0, 0) = m.at(1, 1) = 1.0;
    return m;
}

Matrix3 Matrix3::mul(const Matrix3& o) const {
    Matrix3 r;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            double s = 0.0;
            for (int k = -1; k <= 1; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

double Matrix3::max_abs_diff(const Matrix3& o) const {
    double d = 0.0;
    for (std::size_t k = 0; k < 9; ++k) d = std::max(d, std::abs(e[k] - o.e[k]));
    return d;
}

std::array<double, 3> marginal3(double epsilon) {
    return {epsilon / 2.0, 1.0 - epsilon, epsilon / 2.0};
}

Matrix3 make_transition(const BlockParams& p) {
    Matrix3 m;
    const double a = p.theta_star * p.epsilon;
    m.at(0, 0) = 1.0 - a;
    m.at(0, -1) = m.at(0, 1) = a / 2.0;
    m.at(-1, -1) = m.at(1, 1) = 1.0 - p.theta;
    m.at(-1, 0) = m.at(1, 0) = p.theta;
    m.at(-1, 1) = m.at(1, -1) = 0.0;
    return m;
}

Matrix3 make_joint(const BlockParams& p) {
    Matrix3 m;
    m.at(0, 0) = 1.0 - p.epsilon - p.theta * p.epsilon;
    m.at(-1, -1) = m.at(1, 1) = (1.0 - p.theta) * p.epsilon / 2.0;
    m.at(-1, 1) = m.at(1, -1) = 0.0;
    m.at(0, -1) = m.at(0, 1) = m.at(-1, 0) = m.at(1, 0) = p.theta * p.epsilon / 2.0;
    return m;
}

Matrix3 averaging_matrix(double epsilon) {
    Matrix3 m;
    auto pi = marginal3(epsilon);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) m.at(i, j) = pi[static_cast<std::size_t>(j + 1)];
    return m;
}

Matrix3 flip_matrix() {
    Matrix3 m;
    m.at(-1, -1) = m.at(1, 1) = 0.5;
    m.at(-1, 1) = m.at(1, -1) = -0.5;
    return m;
}

Matrix3 n_step_closed(const BlockParams& p, std::int64_t n) {
    if (n < 1) throw InvalidParams("n_step_closed: n must be >= 1");
    const double zn = std::pow(1.0 - p.theta_star, static_cast<double>(n));
    const double yn = std::pow(1.0 - p.theta, static_cast<double>(n));
    Matrix3 id = Matrix3::identity();
    Matrix3 a = averaging_matrix(p.epsilon);
    Matrix3 c = flip_matrix();
    Matrix3 r;
    for (std::size_t k = 0; k < 9; ++k)
        r.e[k] = zn * id.e[k] + (1.0 - zn) * a.e[k] + (yn - zn) * c.e[k];
    return r;
}

FiniteJoint lag_joint(const BlockParams& p, std::int64_t n) {
    Matrix3 pn = n_step_closed(p, n);
    auto pi = marginal3(p.epsilon);
    std::vector<double> probs(9);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            // the closed form can round the exactly-zero corner entries to
            // ~ -1e-19; clamp, the entries are nonnegative by construction
            double v = pi[static_cast<std::size_t>(i + 1)] * pn.at(i, j);
            probs[Matrix3::idx(i, j)] = v < 0.0 ? 0.0 : v;
        }
    return FiniteJoint({"-1", "0", "1"}, {"-1", "0", "1"}, std::move(probs));
}

double beta_n_exact(const BlockParams& p, std::int64_t n) {
    return mixing::beta_coefficient(lag_joint(p, n));
}

double covariance(const BlockParams& p, std::int64_t n) {
    if (n < 0) throw InvalidParams("covariance: n must be >= 0");
    return p.epsilon * std::pow(1.0 - p.theta, static_cast<double>(n));
}

double asymptotic_variance(const BlockParams& p) {
    return p.epsilon * (2.0 / p.theta - 1.0);
}

double u_n(const BlockParams& p, double n) {
    if (!(n >= 1.0)) throw InvalidParams("u_n: n must be >= 1");
    if (n < 1.5) return p.epsilon;
    const double q = 1.0 - p.theta;
    const double qn1 = std::pow(q, n - 1.0);
    const double qn = qn1 * q;
    const double s1 = q * (1.0 - qn1) / (1.0 - q);
    const double s2 = q * (1.0 - n * qn1 + (n - 1.0) * qn) / ((1.0 - q) * (1.0 - q));
    return p.epsilon * (1.0 + 2.0 * (s1 - s2 / n));
}

double partial_sum_variance(const BlockParams& p, double n) { return n * u_n(p, n); }

std::vector<std::int8_t> sample_path(const BlockParams& p, std::int64_t length,
                                     std::uint64_t seed) {
    if (length < 1) throw InvalidParams("sample_path: length must be >= 1");
    Rng rng(seed);
    std::vector<std::int8_t> path(static_cast<std::size_t>(length));
    const double half = p.epsilon / 2.0;
    const double a = p.theta_star * p.epsilon;

    // X_0 from the invariant marginal: [0, eps/2) -> -1, [eps/2, eps) -> 1, else 0
    double u = rng.uniform();
    std::int8_t s = u < half ? std::int8_t{-1} : (u < p.epsilon ? std::int8_t{1} : std::int8_t{0});
    path[0] = s;
    for (std::int64_t k = 1; k < length; ++k) {
        u = rng.uniform();
        if (s == 0) {
            s = u < a / 2.0 ? std::int8_t{-1} : (u < a ? std::int8_t{1} : std::int8_t{0});
        } else {
            // from +-1: return to 0 with probability theta, else stay
            if (u < p.theta) s = 0;
        }
        path[static_cast<std::size_t>(k)] = s;
    }
    return path;
}

}  // namespace revmix
