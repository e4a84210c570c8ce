#include "revmix/finite_joint.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "revmix/csv.hpp"
#include "revmix/errors.hpp"

namespace revmix {

void DiscretePmf::validate(double tol) const {
    if (states.size() != probs.size() || states.empty())
        throw InvalidParams("pmf: states/probs size mismatch");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw InvalidParams("pmf: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > tol) throw InvalidParams("pmf: mass " + format_double(total));
}

DiscretePmf DiscretePmf::product(const DiscretePmf& a, const DiscretePmf& b) {
    DiscretePmf out;
    out.states.reserve(a.states.size() * b.states.size());
    out.probs.reserve(a.states.size() * b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i)
        for (std::size_t j = 0; j < b.states.size(); ++j) {
            out.states.push_back(a.states[i] + "|" + b.states[j]);
            out.probs.push_back(a.probs[i] * b.probs[j]);
        }
    return out;
}

FiniteJoint::FiniteJoint(std::vector<std::string> row_states, std::vector<std::string> col_states,
                         std::vector<double> probs_row_major)
    : row_states_(std::move(row_states)),
      col_states_(std::move(col_states)),
      p_(std::move(probs_row_major)) {
    if (row_states_.empty() || col_states_.empty())
        throw InvalidParams("joint: empty state set");
    if (p_.size() != row_states_.size() * col_states_.size())
        throw InvalidParams("joint: probability table size mismatch");
}

std::vector<double> FiniteJoint::row_marginal() const {
    std::vector<double> m(rows(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) m[i] += at(i, j);
    return m;
}

std::vector<double> FiniteJoint::col_marginal() const {
    std::vector<double> m(cols(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) m[j] += at(i, j);
    return m;
}

DiscretePmf FiniteJoint::row_pmf() const { return DiscretePmf{row_states_, row_marginal()}; }
DiscretePmf FiniteJoint::col_pmf() const { return DiscretePmf{col_states_, col_marginal()}; }

void FiniteJoint::validate(double tol) const {
    double total = 0.0;
    for (double p : p_) {
        if (!(p >= 0.0)) throw InvalidParams("joint: negative entry");
        total += p;
    }
    if (std::abs(total - 1.0) > tol) throw InvalidParams("joint: mass " + format_double(total));
}

FiniteJoint FiniteJoint::product(const DiscretePmf& a, const DiscretePmf& b) {
    std::vector<double> p;
    p.reserve(a.probs.size() * b.probs.size());
    for (double x : a.probs)
        for (double y : b.probs) p.push_back(x * y);
    return FiniteJoint(a.states, b.states, std::move(p));
}

FiniteJoint FiniteJoint::tensor(const FiniteJoint& a, const FiniteJoint& b) {
    std::vector<std::string> rs, cs;
    for (const auto& x : a.row_states())
        for (const auto& y : b.row_states()) rs.push_back(x + "|" + y);
    for (const auto& x : a.col_states())
        for (const auto& y : b.col_states()) cs.push_back(x + "|" + y);
    std::vector<double> p(rs.size() * cs.size());
    const std::size_t bc = b.cols();
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
            for (std::size_t j1 = 0; j1 < a.cols(); ++j1)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    p[(i1 * b.rows() + i2) * cs.size() + (j1 * bc + j2)] =
                        a.at(i1, j1) * b.at(i2, j2);
    return FiniteJoint(std::move(rs), std::move(cs), std::move(p));
}

void FiniteJoint::to_csv(std::ostream& os) const {
    std::vector<std::string> head{""};
    for (const auto& c : col_states_) head.push_back(c);
    os << csv_row(head);
    for (std::size_t i = 0; i < rows(); ++i) {
        std::vector<std::string> cells{row_states_[i]};
        for (std::size_t j = 0; j < cols(); ++j) cells.push_back(format_double(at(i, j)));
        os << csv_row(cells);
    }
}

FiniteJoint FiniteJoint::from_csv(std::istream& is) {
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        if (!line.empty() && line.back() == ',') out.push_back("");
        return out;
    };
    std::string line;
    if (!std::getline(is, line)) throw InvalidParams("joint csv: empty input");
    auto head = split(line);
    if (head.size() < 2) throw InvalidParams("joint csv: no column states");
    std::vector<std::string> cols(head.begin() + 1, head.end());
    std::vector<std::string> rows;
    std::vector<double> p;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != cols.size() + 1) throw InvalidParams("joint csv: ragged row");
        rows.push_back(cells[0]);
        for (std::size_t j = 1; j < cells.size(); ++j) p.push_back(std::stod(cells[j]));
    }
    return FiniteJoint(std::move(rows), std::move(cols), std::move(p));
}

}  // namespace revmix
