#include "revmix/coding.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "revmix/errors.hpp"
#include "revmix/mixing.hpp"
#include "revmix/rng.hpp"

namespace revmix {

void CodingSpec::validate() const {
    const std::size_t n = base_states.size();
    if (n == 0) throw InvalidParams("coding spec: empty base state set");
    if (f_values.size() != n || v_values.size() != n)
        throw InvalidParams("coding spec: f/v size mismatch");
    if (!(p > 0.0) || !(p < 0.5))
        throw InvalidParams("coding spec: p must lie in (0, 1/2)");
    std::set<double> seen;
    for (double v : v_values) {
        if (!(v > 0.0) || !(v < 1.0))
            throw InvalidParams("coding spec: v values must lie in (0, 1)");
        if (!seen.insert(v).second)
            throw InvalidParams("coding spec: v values must be distinct");
    }
}

double binary_entropy(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw InvalidParams("binary_entropy: p outside (0, 1)");
    return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

double choose_p(double g1) {
    // budgets up to 2 are meaningful: the entropy target g1/2 then spans the
    // full range of the binary entropy on (0, 1/2)
    if (!(g1 > 0.0) || !(g1 <= 2.0)) throw InvalidParams("choose_p: g1 must lie in (0, 2]");
    // binary entropy is increasing on (0, 1/2); scan the dyadic grid downward
    for (int k = 511; k >= 1; --k) {
        double p = static_cast<double>(k) / 1024.0;
        if (binary_entropy(p) <= g1 / 2.0) return p;
    }
    throw BudgetTooSmall("choose_p: no dyadic p in (0, 1/2) fits an entropy budget of " +
                         std::to_string(g1 / 2.0));
}

InjectivityResult injectivity_check(const CodingSpec& spec) {
    const std::size_t n = spec.base_states.size();
    if (n == 0) throw InvalidParams("injectivity check: empty spec");
    struct Coded {
        double value;
        std::size_t state;
        int zi;
    };
    std::vector<Coded> coded;
    coded.reserve(2 * n);
    const double zs[2] = {-spec.p, 1.0 - spec.p};
    for (std::size_t i = 0; i < n; ++i)
        for (int zi = 0; zi < 2; ++zi)
            coded.push_back({spec.f_values[i] + spec.v_values[i] * zs[zi], i, zi});
    std::sort(coded.begin(), coded.end(),
              [](const Coded& a, const Coded& b) { return a.value < b.value; });
    InjectivityResult res;
    for (std::size_t k = 0; k + 1 < coded.size(); ++k) {
        if (std::abs(coded[k + 1].value - coded[k].value) <= 1e-12) {
            res.injective = false;
            res.first = {coded[k].state, coded[k].zi};
            res.second = {coded[k + 1].state, coded[k + 1].zi};
            res.value = coded[k].value;
            return res;
        }
    }
    return res;
}

std::vector<double> code_path(const CodingSpec& spec,
                              std::span<const std::size_t> base_path,
                              std::uint64_t seed) {
    spec.validate();
    auto inj = injectivity_check(spec);
    if (!inj.injective)
        throw InvalidParams("code_path: spec fails the injectivity check");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(base_path.size());
    for (std::size_t idx : base_path) {
        if (idx >= spec.base_states.size())
            throw InvalidParams("code_path: state index out of range");
        double z = rng.uniform() < 1.0 - spec.p ? -spec.p : 1.0 - spec.p;
        out.push_back(spec.f_values[idx] + spec.v_values[idx] * z);
    }
    return out;
}

CodingInfoReport coding_info_report(const FiniteJoint& base_joint, const CodingSpec& spec) {
    spec.validate();
    const std::size_t n = spec.base_states.size();
    if (base_joint.rows() != n || base_joint.cols() != n)
        throw InvalidParams("coding info: joint does not match the base state set");
    base_joint.validate();

    DiscretePmf eta{{"lo", "hi"}, {1.0 - spec.p, spec.p}};
    // coded pair joint: base (s, s') tensored with independent noise (e, e')
    std::vector<std::string> states;
    states.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int e = 0; e < 2; ++e)
            states.push_back(spec.base_states[i] + (e == 0 ? "-" : "+"));
    std::vector<double> probs(4 * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int e = 0; e < 2; ++e)
            for (std::size_t k = 0; k < n; ++k)
                for (int e2 = 0; e2 < 2; ++e2)
                    probs[(2 * i + static_cast<std::size_t>(e)) * 2 * n +
                          (2 * k + static_cast<std::size_t>(e2))] =
                        base_joint.at(i, k) * eta.probs[static_cast<std::size_t>(e)] *
                        eta.probs[static_cast<std::size_t>(e2)];
    FiniteJoint coded(states, states, std::move(probs));

    CodingInfoReport rep;
    rep.base_info = mixing::info_coefficient(base_joint);
    rep.coded_info = mixing::info_coefficient(coded);
    rep.base_entropy = mixing::entropy(base_joint.row_pmf());
    rep.eta_entropy = binary_entropy(spec.p);
    rep.coded_entropy = mixing::entropy(coded.row_pmf());
    return rep;
}

CodingSpec random_spec(std::size_t n_states, double p, std::uint64_t seed) {
    if (n_states == 0) throw InvalidParams("random_spec: need at least one state");
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        CodingSpec spec;
        spec.p = p;
        std::set<double> used;
        for (std::size_t i = 0; i < n_states; ++i) {
            spec.base_states.push_back("s" + std::to_string(i));
            spec.f_values.push_back(std::floor(rng.uniform() * 64.0));
            double v;
            do {
                v = rng.uniform_pos();
            } while (!used.insert(v).second);
            spec.v_values.push_back(v);
        }
        if (injectivity_check(spec).injective) return spec;
    }
    throw InvalidParams("random_spec: could not draw an injective spec");
}

}  // namespace revmix
