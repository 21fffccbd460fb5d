#include "elw/distributions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "elw/spatial.hpp"
#include "elw/statfun.hpp"

namespace elw {

const char* to_string(DistKind k) {
    switch (k) {
        case DistKind::Cauchy: return "cauchy";
        case DistKind::T3: return "t3";
        case DistKind::Copula2d: return "copula2d";
        case DistKind::Copula3d: return "copula3d";
        case DistKind::AsymLaplace: return "asymlaplace";
    }
    return "unknown";
}

DistKind dist_kind_from_string(const std::string& name) {
    if (name == "cauchy") return DistKind::Cauchy;
    if (name == "t3") return DistKind::T3;
    if (name == "copula2d") return DistKind::Copula2d;
    if (name == "copula3d") return DistKind::Copula3d;
    if (name == "asymlaplace") return DistKind::AsymLaplace;
    throw std::invalid_argument("unknown distribution: " + name);
}

void DistributionSpec::validate() const {
    if (dim != 2 && dim != 3) throw std::invalid_argument("DistributionSpec: dim must be 2 or 3");
    if (kind == DistKind::Copula2d && dim != 2)
        throw std::invalid_argument("DistributionSpec: copula2d needs dim 2");
    if (kind == DistKind::Copula3d && dim != 3)
        throw std::invalid_argument("DistributionSpec: copula3d needs dim 3");
    if (kind == DistKind::AsymLaplace) {
        if (!skew.empty() && skew.size() != static_cast<std::size_t>(dim))
            throw std::invalid_argument("DistributionSpec: skew length != dim");
        for (double k : skew)
            if (!(k > 0.0) || !std::isfinite(k))
                throw std::invalid_argument("DistributionSpec: skew entries must be positive");
    }
}

namespace {

// Lower Cholesky factors of the fixed copula correlation matrices, built
// once; a non-positive-definite matrix here is a configuration bug.
Mat copula_chol(DistKind kind) {
    Mat r;
    if (kind == DistKind::Copula2d) {
        r = Mat(2, 2);
        r(0, 0) = 1.0; r(0, 1) = 0.5;
        r(1, 0) = 0.5; r(1, 1) = 1.0;
    } else {
        r = Mat(3, 3);
        r(0, 0) = 1.0; r(0, 1) = 0.5; r(0, 2) = 0.1;
        r(1, 0) = 0.5; r(1, 1) = 1.0; r(1, 2) = 0.1;
        r(2, 0) = 0.1; r(2, 1) = 0.1; r(2, 2) = 1.0;
    }
    const std::size_t n = r.rows();
    Mat l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double dsum = r(j, j);
        for (std::size_t k = 0; k < j; ++k) dsum -= l(j, k) * l(j, k);
        if (dsum <= 0.0)
            throw std::runtime_error("copula correlation matrix not positive definite");
        l(j, j) = std::sqrt(dsum);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = r(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Vec effective_skew(const DistributionSpec& spec) {
    if (!spec.skew.empty()) return spec.skew;
    return Vec(static_cast<std::size_t>(spec.dim), 0.8);
}

}  // namespace

Sample draw_sample(const DistributionSpec& spec, std::size_t n, Rng& gen) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("draw_sample: n >= 1");
    const std::size_t d = static_cast<std::size_t>(spec.dim);
    Mat x(n, d);

    switch (spec.kind) {
        case DistKind::Cauchy:
        case DistKind::T3: {
            const int df = spec.kind == DistKind::Cauchy ? 1 : 3;
            for (std::size_t i = 0; i < n; ++i) {
                // d normals, then df normals whose squares form the chi^2.
                for (std::size_t j = 0; j < d; ++j) x(i, j) = gen.normal();
                double chi2 = 0.0;
                for (int k = 0; k < df; ++k) {
                    const double z = gen.normal();
                    chi2 += z * z;
                }
                const double scale = std::sqrt(static_cast<double>(df) / chi2);
                for (std::size_t j = 0; j < d; ++j) x(i, j) *= scale;
            }
            break;
        }
        case DistKind::Copula2d:
        case DistKind::Copula3d: {
            const Mat l = copula_chol(spec.kind);
            Vec z(d), g(d);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < d; ++j) z[j] = gen.normal();
                for (std::size_t j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) s += l(j, k) * z[k];
                    g[j] = s;
                }
                // Normal marginals pass through; the t(3) marginal goes
                // through the probability integral transform.
                for (std::size_t j = 0; j + 1 < d; ++j) x(i, j) = g[j];
                x(i, d - 1) = t3_quantile(normal_cdf(g[d - 1]));
            }
            break;
        }
        case DistKind::AsymLaplace: {
            const Vec kap = effective_skew(spec);
            Vec offset(d);
            for (std::size_t j = 0; j < d; ++j)
                offset[j] = asym_laplace_median_offset(kap[j]);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    const double e1 = gen.exponential();
                    const double e2 = gen.exponential();
                    x(i, j) = (e1 / kap[j] - kap[j] * e2 - offset[j]) * inv_sqrt2;
                }
            }
            break;
        }
    }
    return Sample{std::move(x), spec};
}

Sample draw_sample(const DistributionSpec& spec, std::size_t n) {
    Rng gen(spec.seed, 0);
    return draw_sample(spec, n, gen);
}

Vec true_spatial_median(const DistributionSpec& spec) {
    spec.validate();
    const std::size_t d = static_cast<std::size_t>(spec.dim);
    if (spec.kind == DistKind::Cauchy || spec.kind == DistKind::T3) return Vec(d, 0.0);

    struct Key {
        int kind, dim;
        Vec skew;
        std::uint64_t seed;
        bool operator<(const Key& o) const {
            return std::tie(kind, dim, skew, seed) < std::tie(o.kind, o.dim, o.skew, o.seed);
        }
    };
    static std::map<Key, Vec> cache;
    static std::mutex cache_mutex;
    const Key key{static_cast<int>(spec.kind), spec.dim, effective_skew(spec), spec.seed};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    // Large-sample stand-in for the population minimizer of E||x - X||.
    Rng gen(spec.seed, 0x6f7261636cULL);  // dedicated oracle stream
    const Sample big = draw_sample(spec, 1'000'000, gen);
    MedianConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 200;
    const Vec med = weighted_spatial_median(big.data, nullptr, cfg).median;

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, med);
    return med;
}

Cdf marginal_cdf(const DistributionSpec& spec, int coord) {
    spec.validate();
    if (coord < 0 || coord >= spec.dim)
        throw std::invalid_argument("marginal_cdf: coordinate out of range");
    switch (spec.kind) {
        case DistKind::Cauchy:
            return [](double x) { return cauchy_cdf(x); };
        case DistKind::T3:
            return [](double x) { return t3_cdf(x); };
        case DistKind::Copula2d:
            if (coord == 0) return [](double x) { return normal_cdf(x); };
            return [](double x) { return t3_cdf(x); };
        case DistKind::Copula3d:
            if (coord < 2) return [](double x) { return normal_cdf(x); };
            return [](double x) { return t3_cdf(x); };
        case DistKind::AsymLaplace: {
            const double kappa = effective_skew(spec)[static_cast<std::size_t>(coord)];
            return [kappa](double x) { return asym_laplace_cdf(x, kappa); };
        }
    }
    throw std::logic_error("marginal_cdf: unreachable");
}

}  // namespace elw
