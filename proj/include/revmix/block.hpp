#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "revmix/finite_joint.hpp"

namespace revmix {

// Parameters of one 3-state building block.  Requires
// 0 < epsilon <= 1/9 and 0 < theta <= 1/9; theta_star = theta/(1-epsilon).
struct BlockParams {
    double epsilon;
    double theta;
    double theta_star;

    BlockParams(double eps, double th);
};

// 3x3 matrix indexed by states {-1, 0, 1}.
struct Matrix3 {
    std::array<double, 9> e{};

    static constexpr std::size_t idx(int i, int j) {
        return static_cast<std::size_t>(i + 1) * 3 + static_cast<std::size_t>(j + 1);
    }
    double at(int i, int j) const { return e[idx(i, j)]; }
    double& at(int i, int j) { return e[idx(i, j)]; }

    static Matrix3 identity();
    Matrix3 mul(const Matrix3& o) const;
    double max_abs_diff(const Matrix3& o) const;
};

// invariant marginal: pi_0 = 1-eps, pi_{+-1} = eps/2; index state+1
std::array<double, 3> marginal3(double epsilon);

Matrix3 make_transition(const BlockParams& p);
Matrix3 make_joint(const BlockParams& p);

// supporting matrices: every row of averaging_matrix is the marginal;
// flip_matrix has +-1/2 in the corners and zeros on the middle row/column
Matrix3 averaging_matrix(double epsilon);
Matrix3 flip_matrix();

// closed-form n-step transition matrix
Matrix3 n_step_closed(const BlockParams& p, std::int64_t n);

// joint law of (X_0, X_n): entries pi_i p^(n)_ij, as a FiniteJoint with
// states "-1", "0", "1"
FiniteJoint lag_joint(const BlockParams& p, std::int64_t n);

// exact absolute-regularity coefficient of (X_0, X_n)
double beta_n_exact(const BlockParams& p, std::int64_t n);

// Cov(X_0, X_n) = eps (1-theta)^n; n = 0 gives Var(X_0) = eps
double covariance(const BlockParams& p, std::int64_t n);

// eps (2/theta - 1), the limit of Var(S_n)/n
double asymptotic_variance(const BlockParams& p);

// u_n = Var(S_n)/n in closed form; n may exceed 2^53 (treated as real)
double u_n(const BlockParams& p, double n);

// Var(S_n) = n * u_n
double partial_sum_variance(const BlockParams& p, double n);

// stationary path X_0..X_{length-1}; deterministic per (params, length, seed)
std::vector<std::int8_t> sample_path(const BlockParams& p, std::int64_t length,
                                     std::uint64_t seed);

}  // namespace revmix
