#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

// Dense symmetric linear algebra kernel.
//
// Everything in this project lives on small dense matrices (the capacity
// guard caps dimensions at max_matrix_dim(), 1024 by default), so the
// routines below favour simplicity and reproducibility over speed: plain
// row-major storage, cyclic Jacobi for eigenvalues, unblocked Cholesky.

namespace seqdisc {

inline constexpr double k_symmetry_rel_tol = 1e-12;
inline constexpr double k_default_psd_tol = 1e-10;

// Thrown when a Cholesky pivot is not positive; carries the pivot index.
class not_positive_definite : public std::runtime_error {
public:
    not_positive_definite(std::size_t pivot, double value);
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

// Thrown when an iterative routine fails to converge within its cap.
class solver_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a requested dimension exceeds max_matrix_dim().
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Default 1024; the SEQDISC_MAX_DIM environment variable overrides it.
std::size_t max_matrix_dim();
void check_capacity(std::size_t dim);

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    Matrix transposed() const;
    double max_abs() const;
    double frobenius_norm() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double scale);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double scale, Matrix m);

// A square matrix whose entries are symmetric to within k_symmetry_rel_tol
// (relative to the largest magnitude entry). The checked constructor rejects
// anything else; trusted() is for matrices symmetric by construction.
class SymMatrix {
public:
    explicit SymMatrix(Matrix m);
    static SymMatrix identity(std::size_t n);
    static SymMatrix trusted(Matrix m);

    std::size_t dim() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& mat() const noexcept { return m_; }
    double trace() const;

private:
    SymMatrix() = default;
    Matrix m_;
};

// Eigenvalues ascending; basis columns are the matching eigenvectors.
struct EigDecomp {
    std::vector<double> eigenvalues;
    Matrix basis;
};

// Kronecker product: entry ((i*rb + x), (j*cb + y)) = a(i,j) * b(x,y).
Matrix kron(const Matrix& a, const Matrix& b);
SymMatrix kron(const SymMatrix& a, const SymMatrix& b);

// k-fold Kronecker power with the capacity guard applied to the result.
SymMatrix kron_power(const SymMatrix& base, int k);

// Cyclic Jacobi sweeps; converged when the off-diagonal Frobenius norm
// drops below 1e-12 * ||m||_F, capped at 100 sweeps (solver_failure beyond).
EigDecomp sym_eig(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

// True when the smallest eigenvalue is >= -tol.
bool is_psd(const SymMatrix& m, double tol = k_default_psd_tol);

// Lower-triangular factor L with L * L^T = m. The pivot threshold is a
// small multiple of machine epsilon times the diagonal scale, so matrices
// that are singular up to roundoff are rejected rather than factored.
Matrix chol(const SymMatrix& m);

Matrix solve_spd(const SymMatrix& m, const Matrix& rhs);
std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& rhs);
Matrix spd_inverse(const SymMatrix& m);

}  // namespace seqdisc
