#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace revmix {

// Probability function on a finite labelled state set.
struct DiscretePmf {
    std::vector<std::string> states;
    std::vector<double> probs;

    void validate(double tol = 1e-12) const;

    // independent product; labels joined as "a|b"
    static DiscretePmf product(const DiscretePmf& a, const DiscretePmf& b);
};

// Bivariate probability table over two finite labelled state sets.  The
// substrate for every dependence coefficient: entry (i, j) is the joint
// probability of row state i and column state j.
class FiniteJoint {
  public:
    FiniteJoint(std::vector<std::string> row_states, std::vector<std::string> col_states,
                std::vector<double> probs_row_major);

    std::size_t rows() const { return row_states_.size(); }
    std::size_t cols() const { return col_states_.size(); }
    double at(std::size_t i, std::size_t j) const { return p_[i * cols() + j]; }
    const std::vector<std::string>& row_states() const { return row_states_; }
    const std::vector<std::string>& col_states() const { return col_states_; }

    std::vector<double> row_marginal() const;
    std::vector<double> col_marginal() const;
    DiscretePmf row_pmf() const;
    DiscretePmf col_pmf() const;

    // entries nonnegative, total mass 1 within tol
    void validate(double tol = 1e-12) const;

    // joint with independent marginals a (rows) and b (cols)
    static FiniteJoint product(const DiscretePmf& a, const DiscretePmf& b);

    // tensor product of two joints (independent pairs)
    static FiniteJoint tensor(const FiniteJoint& a, const FiniteJoint& b);

    // header row = column states, first column = row states, cells = probabilities
    void to_csv(std::ostream& os) const;
    static FiniteJoint from_csv(std::istream& is);

  private:
    std::vector<std::string> row_states_, col_states_;
    std::vector<double> p_;
};

}  // namespace revmix
