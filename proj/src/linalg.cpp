#include "seqdisc/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace seqdisc {

not_positive_definite::not_positive_definite(std::size_t pivot, double value)
    : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " = " + std::to_string(value)),
      pivot_(pivot) {}

std::size_t max_matrix_dim() {
    if (const char* env = std::getenv("SEQDISC_MAX_DIM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 1024;
}

void check_capacity(std::size_t dim) {
    const std::size_t cap = max_matrix_dim();
    if (dim > cap) {
        throw capacity_error("dimension " + std::to_string(dim) + " exceeds the capacity guard " +
                             std::to_string(cap) + " (override with SEQDISC_MAX_DIM)");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius_norm() const {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return std::sqrt(sum);
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double scale) {
    for (double& v : data_) v *= scale;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch in *");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.data() + k * b.cols();
            double* crow = c.data() + i * c.cols();
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) {
    a += b;
    return a;
}

Matrix operator-(Matrix a, const Matrix& b) {
    a -= b;
    return a;
}

Matrix operator*(double scale, Matrix m) {
    m *= scale;
    return m;
}

SymMatrix::SymMatrix(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric matrix must be square");
    const double scale = m.max_abs();
    const double tol = k_symmetry_rel_tol * scale;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw std::invalid_argument("matrix is not symmetric within tolerance");
        }
    }
    m_ = std::move(m);
}

SymMatrix SymMatrix::identity(std::size_t n) { return trusted(Matrix::identity(n)); }

SymMatrix SymMatrix::trusted(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric matrix must be square");
    SymMatrix s;
    s.m_ = std::move(m);
    return s;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    Matrix c(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t x = 0; x < b.rows(); ++x) {
                const std::size_t row = i * b.rows() + x;
                for (std::size_t y = 0; y < b.cols(); ++y) c(row, j * b.cols() + y) = aij * b(x, y);
            }
        }
    }
    return c;
}

SymMatrix kron(const SymMatrix& a, const SymMatrix& b) {
    // Products of symmetric entries are symmetric entry by entry.
    return SymMatrix::trusted(kron(a.mat(), b.mat()));
}

SymMatrix kron_power(const SymMatrix& base, int k) {
    if (k < 1) throw std::invalid_argument("kron_power requires k >= 1");
    if (base.dim() == 0) throw std::invalid_argument("kron_power of empty matrix");
    const std::size_t cap = max_matrix_dim();
    std::size_t dim = 1;
    for (int i = 0; i < k; ++i) {
        if (dim > cap / base.dim()) {
            throw capacity_error("kron_power result exceeds the capacity guard " +
                                 std::to_string(cap) + " (override with SEQDISC_MAX_DIM)");
        }
        dim *= base.dim();
    }
    check_capacity(dim);
    SymMatrix out = base;
    for (int i = 1; i < k; ++i) out = kron(out, base);
    return out;
}

namespace {

double offdiag_frobenius(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) sum += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(sum);
}

}  // namespace

EigDecomp sym_eig(const SymMatrix& m) {
    const std::size_t n = m.dim();
    Matrix a = m.mat();
    Matrix v = Matrix::identity(n);

    const double total_norm = a.frobenius_norm();
    const double threshold = 1e-12 * total_norm;
    constexpr int max_sweeps = 100;

    bool converged = (n < 2) || offdiag_frobenius(a) <= threshold;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(p, r) = a(r, p);
                    a(r, q) = s * arp + c * arq;
                    a(q, r) = a(r, q);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
        converged = offdiag_frobenius(a) <= threshold;
    }
    if (!converged) throw solver_failure("jacobi eigensolver did not converge in 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigDecomp out;
    out.eigenvalues.resize(n);
    out.basis = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.basis(r, k) = v(r, order[k]);
    }
    return out;
}

double min_eigenvalue(const SymMatrix& m) {
    if (m.dim() == 0) throw std::invalid_argument("min_eigenvalue of empty matrix");
    const EigDecomp eig = sym_eig(m);
    return eig.eigenvalues.front();
}

bool is_psd(const SymMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

Matrix chol(const SymMatrix& m) {
    const std::size_t n = m.dim();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
    // Reject pivots at roundoff scale so exactly-singular inputs fail cleanly.
    const double pivot_tol = 8.0 * static_cast<double>(n) * DBL_EPSILON * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
        if (d <= pivot_tol) throw not_positive_definite(j, d);
        l(j, j) = std::sqrt(d);
        const double inv = 1.0 / l(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t t = 0; t < j; ++t) s -= l(i, t) * l(j, t);
            l(i, j) = s * inv;
        }
    }
    return l;
}

namespace {

// Solves L y = b then L^T x = y, overwriting the column in place.
void chol_solve_column(const Matrix& l, double* col) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = col[i];
        for (std::size_t t = 0; t < i; ++t) s -= l(i, t) * col[t];
        col[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = col[ii];
        for (std::size_t t = ii + 1; t < n; ++t) s -= l(t, ii) * col[t];
        col[ii] = s / l(ii, ii);
    }
}

}  // namespace

Matrix solve_spd(const SymMatrix& m, const Matrix& rhs) {
    if (m.dim() != rhs.rows()) throw std::invalid_argument("solve_spd shape mismatch");
    const Matrix l = chol(m);
    const std::size_t n = m.dim();
    Matrix x = rhs.transposed();  // row per rhs column, contiguous for the solves
    for (std::size_t j = 0; j < rhs.cols(); ++j) chol_solve_column(l, x.data() + j * n);
    return x.transposed();
}

std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& rhs) {
    if (m.dim() != rhs.size()) throw std::invalid_argument("solve_spd shape mismatch");
    const Matrix l = chol(m);
    std::vector<double> x = rhs;
    chol_solve_column(l, x.data());
    return x;
}

Matrix spd_inverse(const SymMatrix& m) {
    const Matrix l = chol(m);
    const std::size_t n = m.dim();
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        chol_solve_column(l, col.data());
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    // The exact inverse is symmetric; remove the substitution roundoff skew.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = avg;
            inv(j, i) = avg;
        }
    }
    return inv;
}

}  // namespace seqdisc
