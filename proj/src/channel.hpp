#pragma once

#include "matrix.hpp"

#include <cstddef>
#include <vector>

namespace chancoh {

/// Outcome of checking a matrix against the Choi-matrix invariants
/// (PSD, partial trace over the output equal to the identity) plus the
/// incoherence flag (diagonal Choi matrix).
struct ValidationReport {
    bool hermitian = false;
    bool psd = false;
    bool trace_preserving = false; // partial_trace_b(J) == I within tolerance
    bool incoherent = false;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
    double max_partial_trace_error = 0.0;
    double max_offdiagonal = 0.0;

    bool valid() const { return hermitian && psd && trace_preserving; }
    const char* first_failure() const;
};

/// J = sum_{jk} |j><k| (x) phi(|j><k|) with the fixed index ordering
/// row = j*|B| + alpha. Carries declared dimensions; validity is a query,
/// not a construction guarantee, because superchannel intermediates are
/// legitimately invalid as channels.
class ChoiMatrix {
public:
    ChoiMatrix(std::size_t dim_in, std::size_t dim_out, Matrix matrix);

    std::size_t dim_in() const { return dim_in_; }
    std::size_t dim_out() const { return dim_out_; }
    const Matrix& matrix() const { return matrix_; }

    /// J / |A|: unit-trace state when J satisfies the Choi invariants.
    Matrix normalized() const;

    ValidationReport validate(double tolerance = 1e-9) const;
    bool is_valid(double tolerance = 1e-9) const;

private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    Matrix matrix_;
};

/// CPTP map held as a validated Kraus family {K_n}, each |B| x |A|,
/// with sum_n K_n^dagger K_n = I within 1e-9.
class QuantumChannel {
public:
    static QuantumChannel from_kraus(std::vector<Matrix> kraus);

    /// Kraus reconstruction from scaled eigenvectors; eigenvalues below the
    /// 1e-12 rank cutoff are dropped.
    static QuantumChannel from_choi(const ChoiMatrix& j);

    std::size_t dim_in() const { return dim_in_; }
    std::size_t dim_out() const { return dim_out_; }
    const std::vector<Matrix>& kraus() const { return kraus_; }

    Matrix apply(const Matrix& rho) const;
    ChoiMatrix choi() const;

private:
    QuantumChannel(std::size_t dim_in, std::size_t dim_out, std::vector<Matrix> kraus)
        : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {}

    std::size_t dim_in_;
    std::size_t dim_out_;
    std::vector<Matrix> kraus_;
};

/// Delta_d with Kraus {|j><j|}.
QuantumChannel dephasing_channel(std::size_t dim);

/// Diagonal-Choi test; equivalent to the Upsilon(phi) = phi fixed-point test.
bool is_incoherent(const QuantumChannel& phi, double tol = 1e-9);
bool is_incoherent(const ChoiMatrix& j, double tol = 1e-9);

/// Phi(|j><k|) = (+)_i w_i phi_i(|j><k|); all channels share dim_in and the
/// weights form a probability vector within 1e-12.
QuantumChannel direct_sum(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels);

/// Convex mixture sum_m w_m phi_m realized by the weighted union Kraus set.
QuantumChannel mixture_channel(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels);

struct MaxCoherentSpec {
    std::size_t dim_in = 1;
    std::size_t dim_out = 1;
    std::vector<double> phases; // |A|*|B| angles theta_{j,alpha}, row-major; empty means all zero
};

/// theta_{j,alpha} = 2 pi j alpha / |B|; makes the max-coherent Kraus operator
/// an isometry whenever |A| <= |B|.
std::vector<double> fourier_phases(std::size_t dim_in, std::size_t dim_out);

/// |A| |psi><psi| with |psi> = (1/sqrt(|A||B|)) sum e^{i theta_{j alpha}} |j alpha>.
/// Defined for any phases and dimensions; a valid channel Choi only when the
/// rows of the induced isometry are orthonormal.
ChoiMatrix max_coherent_choi(const MaxCoherentSpec& spec);

/// Single-Kraus channel V with V[alpha][j] = e^{i theta_{j alpha}}/sqrt(|B|).
/// Throws not_trace_preserving when the phases do not give an isometry.
QuantumChannel max_coherent_channel(const MaxCoherentSpec& spec);

/// The worked-example channels: phi1 = max-coherent (2,2), phi2 = max-coherent
/// (2,3), phi_mix = 1/2 phi1 (+) 1/2 phi2 (|B| = 5), and phi0, the
/// trace-preserving incoherent reference channel (diagonal Choi with entries
/// 1/2 on the four AB1 diagonal positions).
struct ExampleChannels {
    QuantumChannel phi1;
    QuantumChannel phi2;
    QuantumChannel phi0;
    QuantumChannel phi_mix;
};
ExampleChannels example_channels();

/// The sub-normalized reference operator printed in the worked example:
/// diagonal Choi with entries 1/4 on the AB1 diagonal positions (per-block
/// trace 1/2). Not a channel; used only inside the counterexample's
/// upper-bound computation.
ChoiMatrix example_phi0_subnormalized();

} // namespace chancoh
