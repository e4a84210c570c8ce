#pragma once

#include "revmix/finite_joint.hpp"

namespace revmix {
namespace mixing {

// Strong-mixing coefficient: max over event pairs (A a union of rows, B a
// union of columns) of |P(A x B) - P(A)P(B)|.  Exact by subset enumeration
// over the smaller axis; both axes are capped at 16 states.
double alpha_coefficient(const FiniteJoint& joint);

// Absolute-regularity coefficient at the finest partition:
// (1/2) sum_ij |p_ij - p_i. p_.j|.
double beta_coefficient(const FiniteJoint& joint);

// Maximal correlation: second-largest singular value of the matrix with
// entries p_ij / sqrt(p_i. p_.j).  Requires strictly positive marginals.
double rho_coefficient(const FiniteJoint& joint);

// Coefficient of information: sum_ij p_ij log(p_ij / (p_i. p_.j)),
// natural log, 0 log 0 := 0.
double info_coefficient(const FiniteJoint& joint);

// Entropy -sum p log p (natural log, 0 log 0 := 0).
double entropy(const DiscretePmf& pmf);

}  // namespace mixing
}  // namespace revmix
