#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chancoh {

using Complex = std::complex<double>;

/// Dense complex matrix in row-major order. The single numeric carrier for
/// Kraus operators, Choi matrices, density matrices and unitaries.
/// Immutable by convention once handed to a channel or superchannel.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    Matrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    bool is_hermitian(double tol) const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(Complex scale);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Complex scale, Matrix m);
Matrix operator*(double scale, Matrix m);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Tensor product with the global index convention (j, alpha) -> j*b.cols + alpha,
/// i.e. the left factor owns the major index.
Matrix kron(const Matrix& a, const Matrix& b);

/// Partial trace over the minor (B) index: out[j][k] = sum_alpha m[(j,alpha)][(k,alpha)].
Matrix partial_trace_b(const Matrix& m, std::size_t dim_a, std::size_t dim_b);

/// Zero all off-diagonal entries (completely dephasing map in the fixed basis).
Matrix dephase(const Matrix& m);

struct EigenSystem {
    std::vector<double> values; // ascending
    Matrix vectors;             // unitary, eigenvector i in column i
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Input must be Hermitian within 1e-10 elementwise.
EigenSystem hermitian_eigen(const Matrix& m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& m);

/// -sum lambda_i log2 lambda_i over the spectrum of rho (0 log 0 := 0).
/// rho must be PSD within -1e-10 and have trace within 1e-8 of expected_trace.
double von_neumann_entropy(const Matrix& rho, double expected_trace = 1.0);

} // namespace chancoh
