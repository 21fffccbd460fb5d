#ifndef ELW_DISTRIBUTIONS_HPP
#define ELW_DISTRIBUTIONS_HPP

#include <cstdint>
#include <string>

#include "elw/constraints.hpp"
#include "elw/linalg.hpp"
#include "elw/rng.hpp"

namespace elw {

enum class DistKind {
    Cauchy,       // spherical multivariate t, 1 df
    T3,           // spherical multivariate t, 3 df
    Copula2d,     // Gaussian copula, rho 0.5, N(0,1) and t(3) marginals
    Copula3d,     // Gaussian copula, two N(0,1) (rho 0.5) and one t(3)
                  // marginal correlated 0.1 with each normal
    AsymLaplace,  // independent asymmetric Laplace components, median zero
};

const char* to_string(DistKind k);
DistKind dist_kind_from_string(const std::string& name);

struct DistributionSpec {
    DistKind kind = DistKind::Cauchy;
    int dim = 2;             // 2 or 3; fixed by kind for the copulas
    Vec skew;                // AsymLaplace only; defaults to 0.8 per component
    std::uint64_t seed = 1;

    void validate() const;
};

struct Sample {
    Mat data;  // n x d
    DistributionSpec spec;

    std::size_t n() const { return data.rows(); }
    std::size_t d() const { return data.cols(); }
};

// Draw n observations. The variate stream is fully pinned down: one
// observation at a time, inverse-CDF normals / log-uniform exponentials in
// the documented component order, so a seed identifies the sample exactly.
Sample draw_sample(const DistributionSpec& spec, std::size_t n);
Sample draw_sample(const DistributionSpec& spec, std::size_t n, Rng& gen);

// Population spatial median. Exact zero for the spherical families; for the
// copulas and the asymmetric Laplace it is located numerically once per
// spec by a Weiszfeld run on a million-point sample and memoized.
Vec true_spatial_median(const DistributionSpec& spec);

// Marginal CDF of one coordinate, for known-F constraint recipes.
Cdf marginal_cdf(const DistributionSpec& spec, int coord);

}  // namespace elw

#endif
