#ifndef ELW_SPATIAL_HPP
#define ELW_SPATIAL_HPP

#include "elw/constraints.hpp"
#include "elw/el_solver.hpp"
#include "elw/linalg.hpp"

namespace elw {

// x / ||x||, zero vector at the origin.
Vec spatial_sign(const Vec& x);

// H(x) = ||x||^-1 (I - x x'/||x||^2), the Jacobian of the sign field;
// zero matrix at the origin. Symmetric PSD with H(x) x = 0.
Mat sign_hessian(const Vec& x);

struct DepthQuery {
    Vec point;
    double depth_value = 0.0;  // 1 - || weighted average sign ||, in [0,1]
};

// Weighted spatial depth of x in the point cloud. Weights must be positive
// and sum to one within 1e-8 (uniform when omitted); the sign convention at
// a sample point itself is S(0) = 0.
DepthQuery depth(const Mat& points, const Vec& x, const Vec* weights = nullptr);

struct MedianConfig {
    double tol = 1e-9;          // on the weighted sign-sum norm
    int max_iter = 500;
    bool record_objective = false;  // keep per-iteration Fermat-Weber values
};

struct SpatialResult {
    Vec median;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    Mat j_hat;  // sum_j w_j S(M-X_j) S(M-X_j)'
    Mat k_hat;  // sum_j w_j H(M-X_j)
    Vec objective_trace;  // filled when record_objective is set
};

// Weighted Fermat-Weber point by Weiszfeld iteration with the Vardi-Zhang
// rule when an iterate coincides with a data point: X_k is stationary iff
// the pull of the remaining mass ||sum_{j!=k} w_j S(X_k - X_j)|| does not
// exceed w_k, and otherwise the iterate steps off along that pull. At such
// an anchored optimum gradient_norm reports the excess max(0, pull - w_k).
// Requires d >= 2 and points not all collinear.
SpatialResult weighted_spatial_median(const Mat& points, const Vec* weights = nullptr,
                                      const MedianConfig& cfg = {});

// Convenience composition: build constraints, solve the EL dual once (the
// weights do not depend on the query point), then run the weighted median.
// Throws std::runtime_error when the dual solve fails.
SpatialResult el_weighted_median_pipeline(const Mat& points, const ConstraintRecipe& recipe,
                                          const SolverConfig& solver_cfg = {},
                                          const MedianConfig& median_cfg = {});

namespace detail {

// One accumulation pass shared by depth and Weiszfeld: distances, the
// weighted sign sum and the weighted inverse-distance moments about x.
// Sums are accumulated over fixed 2048-point blocks and combined in block
// order, so results are identical whether blocks run on one thread or many.
struct WeiszfeldPass {
    Vec sign_sum;       // sum over non-anchored points of w_j (x-X_j)/d_j
    Vec shifted_mean;   // sum w_j X_j / d_j
    double inv_sum = 0.0;   // sum w_j / d_j
    double anchor_weight = 0.0;  // total weight within anchor_radius of x
    double objective = 0.0;      // sum w_j d_j
    double nearest_dist = 0.0;   // distance to the closest sample point
    std::size_t nearest_index = 0;
};

WeiszfeldPass weiszfeld_pass(const Mat& points, const Vec& weights, const Vec& x,
                             double anchor_radius);

}  // namespace detail

}  // namespace elw

#endif
