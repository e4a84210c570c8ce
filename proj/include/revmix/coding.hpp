#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revmix/finite_joint.hpp"

namespace revmix {

// Injective perturbation coding over a finite base chain: a state t with
// auxiliary noise z in {-p, 1-p} is coded as f(t) + v(t) * z.
struct CodingSpec {
    std::vector<std::string> base_states;
    std::vector<double> f_values;
    std::vector<double> v_values;  // distinct, in (0, 1)
    double p = 0.0;                // in (0, 1/2)

    void validate() const;
};

// -p log p - (1-p) log(1-p), natural log
double binary_entropy(double p);

// Largest p of the form k/1024 in (0, 1/2) whose binary entropy is at most
// g1/2.  Throws BudgetTooSmall when even k = 1 exceeds the budget.
double choose_p(double g1);

struct InjectivityResult {
    bool injective = true;
    // colliding coded values, when not injective: (state index, z index 0/1)
    std::pair<std::size_t, int> first{0, 0}, second{0, 0};
    double value = 0.0;
};

// Enumerates all |states| * 2 coded values and reports any pair that agrees
// within 1e-12.
InjectivityResult injectivity_check(const CodingSpec& spec);

// Codes a base path (given as indices into base_states), drawing the noise
// i.i.d. with P(z = -p) = 1-p and P(z = 1-p) = p, independent of the path.
std::vector<double> code_path(const CodingSpec& spec,
                              std::span<const std::size_t> base_path,
                              std::uint64_t seed);

struct CodingInfoReport {
    double base_info = 0.0;
    double coded_info = 0.0;
    double base_entropy = 0.0;
    double eta_entropy = 0.0;   // binary entropy of p
    double coded_entropy = 0.0;
};

// Builds the coded pair's joint table (product structure in the noise
// coordinate) and reports its information coefficient and entropies; the
// coded information must match the base information and the coded entropy
// must equal base entropy + binary entropy of p.
CodingInfoReport coding_info_report(const FiniteJoint& base_joint, const CodingSpec& spec);

// Random spec with distinct v values in (0, 1); regenerates on collision.
CodingSpec random_spec(std::size_t n_states, double p, std::uint64_t seed);

}  // namespace revmix
