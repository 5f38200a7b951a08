#include "qrc/lp.h"

#include <cmath>
#include <limits>

#include "qrc/errors.h"

namespace qrc {

namespace {

// Dense tableau. Rows 0..rows-1 are constraints, row `rows` holds reduced
// costs; the last column holds the right-hand side (negated objective in the
// cost row).
class Tableau {
   public:
    Tableau(Eigen::Index rows, Eigen::Index cols) : t_(rmatrix::Zero(rows + 1, cols + 1)) {}

    Eigen::Index rows() const { return t_.rows() - 1; }
    Eigen::Index cols() const { return t_.cols() - 1; }
    double &at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
    double at(Eigen::Index r, Eigen::Index c) const { return t_(r, c); }
    double &rhs(Eigen::Index r) { return t_(r, cols()); }
    double &cost(Eigen::Index c) { return t_(rows(), c); }
    double objective() const { return -t_(rows(), cols()); }

    void pivot(Eigen::Index pr, Eigen::Index pc) {
        t_.row(pr) /= t_(pr, pc);
        for (Eigen::Index r = 0; r < t_.rows(); ++r) {
            if (r != pr) {
                const double f = t_(r, pc);
                if (f != 0.0) {
                    t_.row(r) -= f * t_.row(pr);
                }
            }
        }
    }

    void drop_row(Eigen::Index r) {
        const Eigen::Index last = t_.rows() - 1;
        rmatrix next(t_.rows() - 1, t_.cols());
        next << t_.topRows(r), t_.middleRows(r + 1, last - r);
        t_ = std::move(next);
    }

   private:
    rmatrix t_;
};

enum class Outcome { optimal, unbounded, iteration_limit };

// Bland's rule: lowest-index improving column enters; among minimum-ratio
// rows the one whose basic variable has the lowest index leaves.
Outcome run_simplex(Tableau &tab, std::vector<Eigen::Index> &basis,
                    const std::vector<bool> &allowed, const LpOptions &opt, uint64_t &iterations) {
    while (true) {
        Eigen::Index enter = -1;
        for (Eigen::Index c = 0; c < tab.cols(); ++c) {
            if (allowed[static_cast<size_t>(c)] && tab.cost(c) < -opt.tol) {
                enter = c;
                break;
            }
        }
        if (enter < 0) {
            return Outcome::optimal;
        }
        if (iterations >= opt.max_iterations) {
            return Outcome::iteration_limit;
        }
        Eigen::Index leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < tab.rows(); ++r) {
            const double a = tab.at(r, enter);
            if (a <= opt.pivot_tol) {
                continue;
            }
            const double ratio = tab.rhs(r) / a;
            const double scale = std::max(1.0, std::abs(best_ratio));
            if (leave < 0 || ratio < best_ratio - 1e-12 * scale) {
                best_ratio = ratio;
                leave = r;
            } else if (std::abs(ratio - best_ratio) <= 1e-12 * scale &&
                       basis[static_cast<size_t>(r)] < basis[static_cast<size_t>(leave)]) {
                leave = r;
            }
        }
        if (leave < 0) {
            return Outcome::unbounded;
        }
        tab.pivot(leave, enter);
        basis[static_cast<size_t>(leave)] = enter;
        ++iterations;
    }
}

}  // namespace

std::string lp_status_name(LpStatus s) {
    switch (s) {
        case LpStatus::optimal:
            return "optimal";
        case LpStatus::infeasible:
            return "infeasible";
        case LpStatus::unbounded:
            return "unbounded";
        case LpStatus::iteration_limit:
            return "iteration_limit";
    }
    return "unknown";
}

LpSolution lp_solve(const LinearProgram &lp, const LpOptions &opt) {
    const Eigen::Index n_vars = lp.objective.size();
    const Eigen::Index n_rows = lp.equality.rows();
    if (lp.equality.cols() != n_vars || lp.rhs.size() != n_rows ||
        (!lp.nonnegative.empty() && static_cast<Eigen::Index>(lp.nonnegative.size()) != n_vars)) {
        throw guard_error("linear program dimensions are inconsistent");
    }
    if (!lp.objective.allFinite() || !lp.equality.allFinite() || !lp.rhs.allFinite()) {
        throw guard_error("linear program has non-finite entries");
    }

    // Split free variables into x+ - x-.
    std::vector<Eigen::Index> column_of(static_cast<size_t>(n_vars));
    std::vector<Eigen::Index> negative_of(static_cast<size_t>(n_vars), -1);
    Eigen::Index n_cols = 0;
    for (Eigen::Index j = 0; j < n_vars; ++j) {
        column_of[static_cast<size_t>(j)] = n_cols++;
        if (!lp.nonnegative.empty() && !lp.nonnegative[static_cast<size_t>(j)]) {
            negative_of[static_cast<size_t>(j)] = n_cols++;
        }
    }

    // Drop all-zero rows up front; a zero row with nonzero rhs is infeasible.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        if (lp.equality.row(r).cwiseAbs().maxCoeff() > 0.0) {
            kept.push_back(r);
        } else if (std::abs(lp.rhs[r]) > opt.tol) {
            return LpSolution{LpStatus::infeasible, rvector::Zero(n_vars), 0.0, 0};
        }
    }
    const auto m = static_cast<Eigen::Index>(kept.size());

    // Columns: [structural n_cols | artificial m].
    Tableau tab(m, n_cols + m);
    std::vector<Eigen::Index> basis(static_cast<size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index r = kept[static_cast<size_t>(i)];
        const double sign = lp.rhs[r] < 0 ? -1.0 : 1.0;
        for (Eigen::Index j = 0; j < n_vars; ++j) {
            const double a = sign * lp.equality(r, j);
            tab.at(i, column_of[static_cast<size_t>(j)]) = a;
            if (negative_of[static_cast<size_t>(j)] >= 0) {
                tab.at(i, negative_of[static_cast<size_t>(j)]) = -a;
            }
        }
        tab.at(i, n_cols + i) = 1.0;
        tab.rhs(i) = sign * lp.rhs[r];
        basis[static_cast<size_t>(i)] = n_cols + i;
    }

    // Phase one: minimize the sum of artificials.
    for (Eigen::Index c = 0; c <= n_cols + m; ++c) {
        double s = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            s += tab.at(i, c);
        }
        tab.at(m, c) = c < n_cols ? -s : (c == n_cols + m ? -s : 0.0);
    }
    uint64_t iterations = 0;
    std::vector<bool> allowed(static_cast<size_t>(n_cols + m), true);
    Outcome phase1 = run_simplex(tab, basis, allowed, opt, iterations);
    if (phase1 == Outcome::iteration_limit) {
        return LpSolution{LpStatus::iteration_limit, rvector::Zero(n_vars), 0.0, iterations};
    }
    const double rhs_scale = std::max(1.0, lp.rhs.cwiseAbs().sum());
    if (tab.objective() > opt.tol * rhs_scale) {
        return LpSolution{LpStatus::infeasible, rvector::Zero(n_vars), 0.0, iterations};
    }

    // Pivot remaining artificials out of the basis; rows where that is
    // impossible are linear combinations of the others.
    for (Eigen::Index i = tab.rows() - 1; i >= 0; --i) {
        if (basis[static_cast<size_t>(i)] < n_cols) {
            continue;
        }
        Eigen::Index col = -1;
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            if (std::abs(tab.at(i, c)) > 1e-9) {
                col = c;
                break;
            }
        }
        if (col >= 0) {
            tab.pivot(i, col);
            basis[static_cast<size_t>(i)] = col;
        } else {
            tab.drop_row(i);
            basis.erase(basis.begin() + i);
        }
    }
    for (Eigen::Index c = n_cols; c < n_cols + m; ++c) {
        allowed[static_cast<size_t>(c)] = false;
    }

    // Phase two: reduced costs for the real objective.
    rvector cost = rvector::Zero(n_cols + m);
    for (Eigen::Index j = 0; j < n_vars; ++j) {
        cost[column_of[static_cast<size_t>(j)]] = lp.objective[j];
        if (negative_of[static_cast<size_t>(j)] >= 0) {
            cost[negative_of[static_cast<size_t>(j)]] = -lp.objective[j];
        }
    }
    const Eigen::Index rows = tab.rows();
    for (Eigen::Index c = 0; c <= n_cols + m; ++c) {
        double z = c < n_cols + m ? cost[c] : 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            z -= cost[basis[static_cast<size_t>(i)]] * tab.at(i, c);
        }
        tab.at(rows, c) = z;
    }
    Outcome phase2 = run_simplex(tab, basis, allowed, opt, iterations);

    LpSolution sol;
    sol.iterations = iterations;
    if (phase2 == Outcome::unbounded) {
        sol.status = LpStatus::unbounded;
        sol.x = rvector::Zero(n_vars);
        return sol;
    }
    if (phase2 == Outcome::iteration_limit) {
        sol.status = LpStatus::iteration_limit;
        sol.x = rvector::Zero(n_vars);
        return sol;
    }
    rvector values = rvector::Zero(n_cols + m);
    for (Eigen::Index i = 0; i < rows; ++i) {
        values[basis[static_cast<size_t>(i)]] = tab.rhs(i);
    }
    sol.x.resize(n_vars);
    for (Eigen::Index j = 0; j < n_vars; ++j) {
        double v = values[column_of[static_cast<size_t>(j)]];
        if (negative_of[static_cast<size_t>(j)] >= 0) {
            v -= values[negative_of[static_cast<size_t>(j)]];
        }
        sol.x[j] = v;
    }
    sol.objective = lp.objective.dot(sol.x);
    sol.status = LpStatus::optimal;
    return sol;
}

}  // namespace qrc
