#ifndef ELW_LINALG_HPP
#define ELW_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace elw {

using Vec = std::vector<double>;

// Dense row-major matrix. Sizes here are small (constraint counts <= ~10,
// point dimensions <= 3), so no blocking or external BLAS.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double norm2(const double* x, std::size_t n);

Vec mat_vec(const Mat& a, const Vec& x);

// x * y^T added in place, scaled.
void add_outer(Mat& a, const double* x, const double* y, double scale);

// Solve A x = b for symmetric positive definite A via Cholesky.
// Returns nullopt when a pivot drops below tol * max diagonal.
std::optional<Vec> cholesky_solve(Mat a, Vec b, double tol = 1e-14);

// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.
Vec jacobi_eigenvalues(Mat a);

// Largest |a(i,j) - a(j,i)| over all pairs.
double asymmetry(const Mat& a);

// Sample covariance (divisor n-1) of the rows of x, about the column means.
Mat row_covariance(const Mat& x);

}  // namespace elw

#endif
