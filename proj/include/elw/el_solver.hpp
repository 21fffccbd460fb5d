#ifndef ELW_EL_SOLVER_HPP
#define ELW_EL_SOLVER_HPP

#include <string>

#include "elw/linalg.hpp"

namespace elw {

// Evaluated constraint functions, one observation per row: u(i,k) is the
// k-th constraint at the i-th observation. Entries must be finite and the
// shape must satisfy m >= 1, n >= m+1; the constructor enforces both.
struct ConstraintMatrix {
    Mat u;

    explicit ConstraintMatrix(Mat values);
    std::size_t n() const { return u.rows(); }
    std::size_t m() const { return u.cols(); }
};

enum class SolveStatus {
    Converged,
    HullViolation,        // zero outside the convex hull of the rows
    SingularConstraints,  // rank-deficient constraint covariance
    NonConvergence,       // iteration budget exhausted
};

const char* to_string(SolveStatus s);

// Multiplier and weights for the empirical likelihood dual problem
//   minimize  R(zeta) = -sum_j log(1 + zeta' u_j)   over  {1 + zeta' u_j > 0}.
// At the minimizer, pi_j = 1 / (n (1 + zeta' u_j)) are positive and sum to
// one, and sum_j pi_j u_j vanishes (to solver tolerance).
struct ELSolution {
    Vec zeta;
    Vec pi;
    int iterations = 0;
    double residual_norm = 0.0;  // || sum_j u_j / (1 + zeta' u_j) ||
    bool converged = false;
    SolveStatus status = SolveStatus::NonConvergence;
};

struct SolverConfig {
    double tolerance = 1e-10;      // on residual_norm / n
    int max_iterations = 100;
    double line_search_shrink = 0.5;
};

// Damped Newton from zeta = 0 with a backtracking line search that keeps
// every 1 + zeta' u_j >= 1/n^2. Feasibility of the problem (zero interior
// to the convex hull of the rows) is detected operationally: a collapsed
// line search or diverging iterates report HullViolation.
ELSolution solve_dual(const ConstraintMatrix& u, const SolverConfig& cfg = {});

// -sum_j log(1 + zeta' u_j); throws std::domain_error when any term is
// outside the log domain.
double dual_objective(const ConstraintMatrix& u, const Vec& zeta);

// Gradient of the dual objective, -sum_j u_j / (1 + zeta' u_j).
Vec dual_gradient(const ConstraintMatrix& u, const Vec& zeta);

// pi_j = 1 / (n (1 + zeta' u_j)), no renormalization.
Vec weights_from_zeta(const ConstraintMatrix& u, const Vec& zeta);

}  // namespace elw

#endif
