#include "matrix.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chancoh {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kTraceTol = 1e-8;

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise(Errc::dimension_mismatch, std::string(op) + ": shape mismatch");
}

} // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

Complex Matrix::trace() const {
    if (!square()) raise(Errc::invalid_argument, "trace: matrix not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool Matrix::is_hermitian(double tol) const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(Complex scale) {
    for (Complex& z : data_) z *= scale;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) raise(Errc::dimension_mismatch, "operator*: inner dimension mismatch");
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

Matrix operator*(Complex scale, Matrix m) { return m *= scale; }
Matrix operator*(double scale, Matrix m) { return m *= Complex(scale, 0.0); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return out;
}

Matrix partial_trace_b(const Matrix& m, std::size_t dim_a, std::size_t dim_b) {
    const std::size_t d = dim_a * dim_b;
    if (m.rows() != d || m.cols() != d)
        raise(Errc::dimension_mismatch, "partial_trace_b: matrix is not (dim_a*dim_b) square");
    Matrix out(dim_a, dim_a);
    for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_a; ++k) {
            Complex s = 0.0;
            for (std::size_t alpha = 0; alpha < dim_b; ++alpha) s += m(j * dim_b + alpha, k * dim_b + alpha);
            out(j, k) = s;
        }
    return out;
}

Matrix dephase(const Matrix& m) {
    if (!m.square()) raise(Errc::invalid_argument, "dephase: matrix not square");
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) = m(i, i);
    return out;
}

EigenSystem hermitian_eigen(const Matrix& m) {
    if (!m.square()) raise(Errc::invalid_argument, "hermitian_eigen: matrix not square");
    if (!m.is_hermitian(kHermitianTol)) raise(Errc::invalid_argument, "hermitian_eigen: matrix not Hermitian within 1e-10");

    const std::size_t n = m.rows();
    EigenSystem sys;
    sys.values.assign(n, 0.0);
    sys.vectors = Matrix::identity(n);
    if (n == 0) return sys;

    // Symmetrize to kill representation noise before iterating.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    double frob = 0.0;
    for (const Complex& z : a.data()) frob += std::norm(z);
    frob = std::sqrt(frob);
    const double stop = 1e-15 * std::max(1.0, frob);

    Matrix& v = sys.vectors;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= stop / n) continue;

                // Phase factor alpha makes the pivot real; a real Jacobi rotation
                // with tangent t then annihilates it.
                const Complex alpha = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: A <- A R with R[p][p]=alpha*c, R[p][q]=alpha*s, R[q][p]=-s, R[q][q]=c.
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex tp = a(i, p);
                    const Complex tq = a(i, q);
                    a(i, p) = tp * (alpha * c) - tq * s;
                    a(i, q) = tp * (alpha * s) + tq * c;
                }
                // Rows: A <- R^dagger A.
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex tp = a(p, j);
                    const Complex tq = a(q, j);
                    a(p, j) = std::conj(alpha) * c * tp - s * tq;
                    a(q, j) = std::conj(alpha) * s * tp + c * tq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex tp = v(i, p);
                    const Complex tq = v(i, q);
                    v(i, p) = tp * (alpha * c) - tq * s;
                    v(i, q) = tp * (alpha * s) + tq * c;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Matrix sorted(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        sys.values[col] = a(order[col], order[col]).real();
        for (std::size_t row = 0; row < n; ++row) sorted(row, col) = v(row, order[col]);
    }
    sys.vectors = std::move(sorted);
    return sys;
}

double trace_norm(const Matrix& m) {
    if (!m.square()) raise(Errc::invalid_argument, "trace_norm: matrix not square");
    if (!m.is_hermitian(kHermitianTol)) raise(Errc::invalid_argument, "trace_norm: matrix not Hermitian within 1e-10");
    const EigenSystem sys = hermitian_eigen(m);
    double sum = 0.0;
    for (double w : sys.values) sum += std::abs(w);
    return sum;
}

double von_neumann_entropy(const Matrix& rho, double expected_trace) {
    if (!rho.square()) raise(Errc::invalid_argument, "von_neumann_entropy: matrix not square");
    if (!rho.is_hermitian(kHermitianTol))
        raise(Errc::invalid_argument, "von_neumann_entropy: matrix not Hermitian within 1e-10");
    if (std::abs(rho.trace().real() - expected_trace) > kTraceTol)
        raise(Errc::invalid_argument, "von_neumann_entropy: trace deviates from declared normalization");

    const EigenSystem sys = hermitian_eigen(rho);
    double entropy = 0.0;
    for (double w : sys.values) {
        if (w < -kPsdTol) raise(Errc::invalid_argument, "von_neumann_entropy: negative eigenvalue beyond tolerance");
        if (w > 0.0) entropy -= w * std::log2(w);
    }
    return std::max(entropy, 0.0);
}

} // namespace chancoh
