#include "revmix/mixing.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "revmix/errors.hpp"

namespace revmix {
namespace mixing {

namespace {

constexpr std::size_t kAlphaCap = 16;

// centered table d[i][j] = p_ij - r_i c_j, laid out row-major with the
// enumerated axis as "rows"
std::vector<double> centered(const FiniteJoint& j, bool transpose) {
    auto r = j.row_marginal();
    auto c = j.col_marginal();
    std::size_t R = j.rows(), C = j.cols();
    std::vector<double> d;
    if (!transpose) {
        d.resize(R * C);
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t k = 0; k < C; ++k) d[i * C + k] = j.at(i, k) - r[i] * c[k];
    } else {
        d.resize(C * R);
        for (std::size_t k = 0; k < C; ++k)
            for (std::size_t i = 0; i < R; ++i) d[k * R + i] = j.at(i, k) - r[i] * c[k];
    }
    return d;
}

}  // namespace

double alpha_coefficient(const FiniteJoint& joint) {
    joint.validate();
    const std::size_t R = joint.rows(), C = joint.cols();
    if (R > kAlphaCap || C > kAlphaCap)
        throw StateSpaceTooLarge("alpha: state counts exceed exact enumeration cap of 16");

    // Enumerate subsets A of the smaller axis.  For fixed A the optimal B
    // collects the columns with positive centered mass, so
    // alpha = max_A sum_j max(0, sum_{i in A} d_ij).
    const bool flip = C < R;
    const std::size_t n = flip ? C : R;   // enumerated axis
    const std::size_t m = flip ? R : C;   // summed axis
    std::vector<double> d = centered(joint, flip);

    std::vector<double> acc(m, 0.0);
    double best = 0.0;
    std::uint32_t prev = 0;
    // Gray-code walk so each step flips one row in or out of A.
    for (std::uint32_t g = 1; g < (1u << n); ++g) {
        std::uint32_t gray = g ^ (g >> 1);
        std::uint32_t diff = gray ^ prev;
        prev = gray;
        int bit = std::countr_zero(diff);
        double sign = (gray & diff) ? 1.0 : -1.0;
        const double* row = &d[static_cast<std::size_t>(bit) * m];
        double pos = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            acc[k] += sign * row[k];
            if (acc[k] > 0.0) pos += acc[k];
        }
        best = std::max(best, pos);
    }
    return best;
}

double beta_coefficient(const FiniteJoint& joint) {
    joint.validate();
    auto r = joint.row_marginal();
    auto c = joint.col_marginal();
    double total = 0.0;
    for (std::size_t i = 0; i < joint.rows(); ++i)
        for (std::size_t j = 0; j < joint.cols(); ++j)
            total += std::abs(joint.at(i, j) - r[i] * c[j]);
    return 0.5 * total;
}

double rho_coefficient(const FiniteJoint& joint) {
    joint.validate();
    auto r = joint.row_marginal();
    auto c = joint.col_marginal();
    for (double x : r)
        if (x <= 0.0) throw DegenerateMarginal("rho: zero row marginal");
    for (double x : c)
        if (x <= 0.0) throw DegenerateMarginal("rho: zero column marginal");
    if (joint.rows() < 2 || joint.cols() < 2) return 0.0;

    Eigen::MatrixXd m(joint.rows(), joint.cols());
    for (std::size_t i = 0; i < joint.rows(); ++i)
        for (std::size_t j = 0; j < joint.cols(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                joint.at(i, j) / std::sqrt(r[i] * c[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double rho = svd.singularValues()(1);
    return std::clamp(rho, 0.0, 1.0);
}

double info_coefficient(const FiniteJoint& joint) {
    joint.validate();
    auto r = joint.row_marginal();
    auto c = joint.col_marginal();
    double total = 0.0;
    for (std::size_t i = 0; i < joint.rows(); ++i)
        for (std::size_t j = 0; j < joint.cols(); ++j) {
            double p = joint.at(i, j);
            if (p > 0.0) total += p * std::log(p / (r[i] * c[j]));
        }
    return std::max(total, 0.0);
}

double entropy(const DiscretePmf& pmf) {
    pmf.validate();
    double h = 0.0;
    for (double p : pmf.probs)
        if (p > 0.0) h -= p * std::log(p);
    return std::max(h, 0.0);
}

}  // namespace mixing
}  // namespace revmix
