#include "bornlab/simplex_lp.hpp"

#include <stdexcept>
#include <vector>

namespace bornlab {

namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

constexpr long kMaxIterations = 200000;

struct Tableau {
    MatrixXd t;             // m x (n + m + 1); artificial block then rhs
    RowVectorXd phase_cost; // reduced costs, phase 1
    RowVectorXd real_cost;  // reduced costs, phase 2
    double phase_obj = 0.0;
    double real_obj = 0.0;
    std::vector<Eigen::Index> basis;
    Eigen::Index n = 0; // structural variables
    Eigen::Index m = 0;

    void pivot(Eigen::Index row, Eigen::Index col) {
        t.row(row) /= t(row, col);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = t(i, col);
            if (f != 0.0) t.row(i) -= f * t.row(row);
        }
        double fp = phase_cost[col];
        if (fp != 0.0) {
            phase_cost -= fp * t.row(row).head(phase_cost.size());
            phase_obj -= fp * t(row, t.cols() - 1);
        }
        double fr = real_cost[col];
        if (fr != 0.0) {
            real_cost -= fr * t.row(row).head(real_cost.size());
            real_obj -= fr * t(row, t.cols() - 1);
        }
        basis[static_cast<std::size_t>(row)] = col;
    }

    // Lexicographically smallest row among positive-pivot candidates:
    // compare (rhs, row entries in fixed column order) scaled by the pivot.
    Eigen::Index lex_leaving(Eigen::Index col, double tol) const {
        Eigen::Index best = -1;
        const Eigen::Index rhs = t.cols() - 1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (t(i, col) <= tol) continue;
            if (best < 0) {
                best = i;
                continue;
            }
            double ratio_i = t(i, rhs) / t(i, col);
            double ratio_b = t(best, rhs) / t(best, col);
            if (ratio_i < ratio_b - 1e-15) {
                best = i;
            } else if (ratio_i <= ratio_b + 1e-15) {
                for (Eigen::Index c = 0; c < rhs; ++c) {
                    double vi = t(i, c) / t(i, col);
                    double vb = t(best, c) / t(best, col);
                    if (vi < vb - 1e-15) {
                        best = i;
                        break;
                    }
                    if (vi > vb + 1e-15) break;
                }
            }
        }
        return best;
    }
};

} // namespace

LpSolution solve_lp(const LpProblem& problem, double tol) {
    const Eigen::Index m = problem.a.rows();
    const Eigen::Index n = problem.a.cols();
    if (problem.b.size() != m || problem.c.size() != n)
        throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.t.setZero(m, n + m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        double sign = problem.b[i] < 0.0 ? -1.0 : 1.0;
        tb.t.row(i).head(n) = sign * problem.a.row(i);
        tb.t(i, n + i) = 1.0;
        tb.t(i, n + m) = sign * problem.b[i];
    }
    tb.basis.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) tb.basis[static_cast<std::size_t>(i)] = n + i;

    // Phase 1: minimize the artificial sum. Reduced costs after pricing out
    // the artificial basis.
    tb.phase_cost.setZero(n + m);
    for (Eigen::Index j = 0; j < n; ++j) tb.phase_cost[j] = -tb.t.col(j).sum();
    tb.phase_obj = -tb.t.col(n + m).sum();

    tb.real_cost.setZero(n + m);
    tb.real_cost.head(n) = problem.c;
    tb.real_obj = 0.0;

    LpSolution solution;

    auto run = [&](bool phase1) -> bool {
        for (;;) {
            if (++solution.iterations > kMaxIterations)
                throw std::runtime_error("solve_lp: iteration limit hit");
            const RowVectorXd& cost = phase1 ? tb.phase_cost : tb.real_cost;
            Eigen::Index enter = -1;
            double best = -tol;
            for (Eigen::Index j = 0; j < n; ++j) { // artificials never re-enter
                if (cost[j] < best) {
                    best = cost[j];
                    enter = j;
                }
            }
            if (enter < 0) return true;
            Eigen::Index leave = tb.lex_leaving(enter, tol);
            if (leave < 0) return false; // unbounded direction
            tb.pivot(leave, enter);
        }
    };

    run(true);
    if (-tb.phase_obj > 1e-7) {
        solution.status = LpStatus::Infeasible;
        return solution;
    }

    // Drive leftover artificial basics out; rows that cannot pivot are
    // redundant constraints and stay parked at zero.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (tb.basis[static_cast<std::size_t>(i)] < n) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(tb.t(i, j)) > 1e-7) {
                tb.pivot(i, j);
                break;
            }
        }
    }

    if (!run(false)) {
        solution.status = LpStatus::Unbounded;
        return solution;
    }

    solution.status = LpStatus::Optimal;
    solution.x.setZero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::Index j = tb.basis[static_cast<std::size_t>(i)];
        if (j < n) solution.x[j] = tb.t(i, n + m);
    }
    solution.objective = problem.c.dot(solution.x);
    return solution;
}

} // namespace bornlab
