#ifndef ELW_ESTIMATORS_HPP
#define ELW_ESTIMATORS_HPP

#include <functional>
#include <string>

#include "elw/constraints.hpp"
#include "elw/el_solver.hpp"
#include "elw/linalg.hpp"

namespace elw {

// A linear functional target: theta = E psi(Z) with psi mapping a
// d-dimensional observation to r values.
struct FunctionalSpec {
    std::function<void(const double* z, std::size_t d, double* out)> psi;
    std::size_t r = 1;
    std::string description;
};

// Catalog of functionals used by the command line and the tests.
FunctionalSpec psi_identity(std::size_t d);
FunctionalSpec psi_coordinate_sum();         // x + y on paired data
FunctionalSpec psi_coordinate_difference();  // x - y on paired data
FunctionalSpec psi_rectangle(double sx, double sy);  // 1[x<=sx, y<=sy]

struct EstimateReport {
    Vec theta_plain;  // sample mean of psi
    Vec theta_el;     // EL-weighted mean of psi
    Vec zeta;
    std::size_t m_used = 0;  // constraint columns actually built
};

// theta_el = sum_j pi_j psi(Z_j) with pi from the dual solve on the recipe's
// constraints. Throws std::runtime_error when the solve fails and
// std::domain_error when psi produces non-finite values.
EstimateReport el_estimate(const Mat& points, const FunctionalSpec& spec,
                           const ConstraintRecipe& recipe, const SolverConfig& cfg = {});

// Both marginals known: cosine sieve of width 2m through F and G.
EstimateReport known_marginals_estimate(const Mat& xy, const FunctionalSpec& spec, int m,
                                        Cdf f, Cdf g, const SolverConfig& cfg = {});

// Marginals equal but unknown: pooled-EDF cosine differences of width m.
EstimateReport equal_marginals_estimate(const Mat& xy, const FunctionalSpec& spec, int m,
                                        const SolverConfig& cfg = {});

}  // namespace elw

#endif
