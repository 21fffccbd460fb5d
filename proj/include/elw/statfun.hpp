#ifndef ELW_STATFUN_HPP
#define ELW_STATFUN_HPP

namespace elw {

// Standard normal CDF and its inverse. The inverse uses Wichura's rational
// approximations (algorithm AS 241, PPND16 accuracy), so quantile transforms
// are reproducible to full double precision without libm differences.
double normal_cdf(double x);
double normal_quantile(double p);

// Student t with 3 degrees of freedom. The CDF has the closed form
//   F(x) = 1/2 + (atan(x/sqrt(3)) + sqrt(3) x / (x^2 + 3)) / pi,
// the quantile is obtained by safeguarded Newton inversion.
double t3_cdf(double x);
double t3_quantile(double p);

// Standard Cauchy.
double cauchy_cdf(double x);
double cauchy_quantile(double p);

// Asymmetric Laplace with skew kappa and unit scale, shifted so the median
// sits at zero. Draws correspond to (E1/kappa - kappa*E2 - med) / sqrt(2)
// with E1, E2 unit exponentials.
double asym_laplace_median_offset(double kappa);
double asym_laplace_cdf(double x, double kappa);

}  // namespace elw

#endif
