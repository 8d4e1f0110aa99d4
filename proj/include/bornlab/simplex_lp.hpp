#pragma once

#include <Eigen/Dense>

namespace bornlab {

/// min c.x  subject to  A x = b,  x >= 0.
struct LpProblem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    long iterations = 0;
};

/// Two-phase dense tableau simplex. Dantzig entering rule; the leaving row is
/// chosen by the lexicographic ratio rule (valid because the tableau starts
/// from an identity artificial basis), which rules out cycling on the highly
/// degenerate cone-factorization problems this solves.
LpSolution solve_lp(const LpProblem& problem, double tol = 1e-9);

} // namespace bornlab
