#include "elw/statfun.hpp"

#include <cmath>
#include <stdexcept>

namespace elw {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.7320508075688772935;
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

// Wichura (1988), applied statistics algorithm AS 241, routine PPND16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double t3_cdf(double x) {
    const double u = x / kSqrt3;
    return 0.5 + (std::atan(u) + kSqrt3 * x / (x * x + 3.0)) / kPi;
}

namespace {
double t3_density(double x) {
    const double b = 1.0 + x * x / 3.0;
    return 2.0 / (kSqrt3 * kPi * b * b);
}
}  // namespace

double t3_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t3_quantile: p outside (0,1)");
    if (p == 0.5) return 0.0;
    // Work on the upper tail; 1 - F(x) ~ 2 sqrt(3) / (pi x^3) bounds the
    // root, so the bracket starts within a factor of two of the answer.
    const bool flip = p < 0.5;
    const double q = flip ? p : 1.0 - p;  // upper-tail probability of |root|
    double lo = 0.0;
    double hi = std::cbrt(2.0 * kSqrt3 / (kPi * q)) + 2.0;
    while (t3_cdf(hi) < 1.0 - q) hi *= 2.0;

    double x = std::min(hi, std::cbrt(2.0 * kSqrt3 / (kPi * q)));
    for (int it = 0; it < 200; ++it) {
        const double f = t3_cdf(x) - (1.0 - q);
        if (f > 0.0) hi = std::min(hi, x);
        else lo = std::max(lo, x);
        const double dfdx = t3_density(x);
        double xn = x - f / dfdx;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-14 * (1.0 + std::abs(xn))) {
            x = xn;
            break;
        }
        x = xn;
    }
    return flip ? -x : x;
}

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / kPi; }

double cauchy_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("cauchy_quantile: p outside (0,1)");
    return std::tan(kPi * (p - 0.5));
}

double asym_laplace_median_offset(double kappa) {
    if (!(kappa > 0.0)) throw std::domain_error("asym_laplace: kappa must be positive");
    const double k2 = kappa * kappa;
    // Median of E1/kappa - kappa*E2; the branch depends on which side of the
    // mode holds mass 1/2 (right side for kappa < 1).
    if (kappa <= 1.0) return std::log(2.0 / (1.0 + k2)) / kappa;
    return kappa * std::log((1.0 + k2) / (2.0 * k2));
}

double asym_laplace_cdf(double x, double kappa) {
    if (!(kappa > 0.0)) throw std::domain_error("asym_laplace: kappa must be positive");
    const double k2 = kappa * kappa;
    // Undo the median shift and the 1/sqrt(2) scale of the sampler.
    const double t = std::sqrt(2.0) * x + asym_laplace_median_offset(kappa);
    if (t >= 0.0) return 1.0 - std::exp(-kappa * t) / (1.0 + k2);
    return k2 / (1.0 + k2) * std::exp(t / kappa);
}

}  // namespace elw
