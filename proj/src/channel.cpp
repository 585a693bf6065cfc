#include "channel.hpp"

#include "error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace chancoh {

namespace {

constexpr double kTracePreservingTol = 1e-9;
constexpr double kChoiTol = 1e-9;
constexpr double kWeightTol = 1e-12;
constexpr double kRankCutoff = 1e-12;

// vec with the (j, alpha) -> j*|B| + alpha ordering: v[(j,alpha)] = K[alpha][j].
Matrix choi_vector(const Matrix& kraus) {
    Matrix v(kraus.rows() * kraus.cols(), 1);
    for (std::size_t j = 0; j < kraus.cols(); ++j)
        for (std::size_t alpha = 0; alpha < kraus.rows(); ++alpha)
            v(j * kraus.rows() + alpha, 0) = kraus(alpha, j);
    return v;
}

void check_probability_vector(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < -kWeightTol) raise(Errc::invalid_argument, "weights: negative probability");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTol) raise(Errc::invalid_argument, "weights: probabilities do not sum to 1");
}

} // namespace

const char* ValidationReport::first_failure() const {
    if (!hermitian) return "hermitian";
    if (!psd) return "psd";
    if (!trace_preserving) return "partial_trace";
    return "";
}

ChoiMatrix::ChoiMatrix(std::size_t dim_in, std::size_t dim_out, Matrix matrix)
    : dim_in_(dim_in), dim_out_(dim_out), matrix_(std::move(matrix)) {
    if (dim_in_ == 0 || dim_out_ == 0) raise(Errc::invalid_argument, "ChoiMatrix: zero dimension");
    const std::size_t d = dim_in_ * dim_out_;
    if (matrix_.rows() != d || matrix_.cols() != d)
        raise(Errc::dimension_mismatch, "ChoiMatrix: matrix shape does not match declared dimensions");
}

Matrix ChoiMatrix::normalized() const {
    Matrix out = matrix_;
    out *= Complex(1.0 / static_cast<double>(dim_in_), 0.0);
    return out;
}

ValidationReport ChoiMatrix::validate(double tolerance) const {
    ValidationReport report;

    double herm = 0.0;
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
        for (std::size_t j = i; j < matrix_.cols(); ++j)
            herm = std::max(herm, std::abs(matrix_(i, j) - std::conj(matrix_(j, i))));
    report.max_hermiticity_error = herm;
    report.hermitian = herm <= 1e-10;

    double offdiag = 0.0;
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
        for (std::size_t j = 0; j < matrix_.cols(); ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(matrix_(i, j)));
    report.max_offdiagonal = offdiag;
    report.incoherent = offdiag <= tolerance;

    if (report.hermitian) {
        const EigenSystem sys = hermitian_eigen(matrix_);
        report.min_eigenvalue = sys.values.empty() ? 0.0 : sys.values.front();
        report.psd = report.min_eigenvalue >= -tolerance;
    }

    const Matrix reduced = partial_trace_b(matrix_, dim_in_, dim_out_);
    report.max_partial_trace_error = max_abs_diff(reduced, Matrix::identity(dim_in_));
    report.trace_preserving = report.max_partial_trace_error <= tolerance;

    return report;
}

bool ChoiMatrix::is_valid(double tolerance) const { return validate(tolerance).valid(); }

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus) {
    if (kraus.empty()) raise(Errc::invalid_argument, "from_kraus: empty Kraus family");
    const std::size_t dim_out = kraus.front().rows();
    const std::size_t dim_in = kraus.front().cols();
    if (dim_in == 0 || dim_out == 0) raise(Errc::invalid_argument, "from_kraus: zero dimension");
    for (const Matrix& k : kraus)
        if (k.rows() != dim_out || k.cols() != dim_in)
            raise(Errc::dimension_mismatch, "from_kraus: Kraus operators have mixed shapes");

    Matrix sum(dim_in, dim_in);
    for (const Matrix& k : kraus) sum += k.adjoint() * k;
    const double err = max_abs_diff(sum, Matrix::identity(dim_in));
    if (err > kTracePreservingTol)
        raise(Errc::not_trace_preserving,
              "from_kraus: sum K^dagger K deviates from identity by " + std::to_string(err));

    return QuantumChannel(dim_in, dim_out, std::move(kraus));
}

QuantumChannel QuantumChannel::from_choi(const ChoiMatrix& j) {
    const ValidationReport report = j.validate(kChoiTol);
    if (!report.valid())
        raise(Errc::invalid_choi, std::string("from_choi: invariant failed: ") + report.first_failure());

    const EigenSystem sys = hermitian_eigen(j.matrix());
    std::vector<Matrix> kraus;
    const std::size_t dim_in = j.dim_in();
    const std::size_t dim_out = j.dim_out();
    for (std::size_t idx = 0; idx < sys.values.size(); ++idx) {
        const double w = sys.values[idx];
        if (w <= kRankCutoff) continue;
        const double scale = std::sqrt(w);
        Matrix k(dim_out, dim_in);
        for (std::size_t col = 0; col < dim_in; ++col)
            for (std::size_t alpha = 0; alpha < dim_out; ++alpha)
                k(alpha, col) = scale * sys.vectors(col * dim_out + alpha, idx);
        kraus.push_back(std::move(k));
    }
    if (kraus.empty()) raise(Errc::invalid_choi, "from_choi: matrix has no positive spectrum");
    return from_kraus(std::move(kraus));
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
    if (rho.rows() != dim_in_ || rho.cols() != dim_in_)
        raise(Errc::dimension_mismatch, "apply: state dimension does not match channel input");
    Matrix out(dim_out_, dim_out_);
    for (const Matrix& k : kraus_) out += k * rho * k.adjoint();
    return out;
}

ChoiMatrix QuantumChannel::choi() const {
    const std::size_t d = dim_in_ * dim_out_;
    Matrix j(d, d);
    for (const Matrix& k : kraus_) {
        const Matrix v = choi_vector(k);
        for (std::size_t r = 0; r < d; ++r) {
            const Complex vr = v(r, 0);
            if (vr == Complex(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < d; ++c) j(r, c) += vr * std::conj(v(c, 0));
        }
    }
    return ChoiMatrix(dim_in_, dim_out_, std::move(j));
}

QuantumChannel dephasing_channel(std::size_t dim) {
    if (dim == 0) raise(Errc::invalid_argument, "dephasing_channel: zero dimension");
    std::vector<Matrix> kraus;
    kraus.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Matrix k(dim, dim);
        k(j, j) = 1.0;
        kraus.push_back(std::move(k));
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

bool is_incoherent(const ChoiMatrix& j, double tol) {
    const Matrix& m = j.matrix();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (r != c && std::abs(m(r, c)) > tol) return false;
    return true;
}

bool is_incoherent(const QuantumChannel& phi, double tol) { return is_incoherent(phi.choi(), tol); }

QuantumChannel direct_sum(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels) {
    if (weights.size() != channels.size() || channels.empty())
        raise(Errc::invalid_argument, "direct_sum: weights and channels must be non-empty and aligned");
    check_probability_vector(weights);

    const std::size_t dim_in = channels.front().dim_in();
    std::size_t dim_out = 0;
    for (const QuantumChannel& ch : channels) {
        if (ch.dim_in() != dim_in) raise(Errc::dimension_mismatch, "direct_sum: channels must share dim_in");
        dim_out += ch.dim_out();
    }

    // Lifting each Kraus operator into its output block realizes
    // Phi(|j><k|) = (+)_i w_i phi_i(|j><k|) directly.
    std::vector<Matrix> kraus;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const double scale = std::sqrt(weights[i]);
        for (const Matrix& k : channels[i].kraus()) {
            Matrix lifted(dim_out, dim_in);
            for (std::size_t r = 0; r < k.rows(); ++r)
                for (std::size_t c = 0; c < k.cols(); ++c) lifted(offset + r, c) = scale * k(r, c);
            kraus.push_back(std::move(lifted));
        }
        offset += channels[i].dim_out();
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

QuantumChannel mixture_channel(const std::vector<double>& weights, const std::vector<QuantumChannel>& channels) {
    if (weights.size() != channels.size() || channels.empty())
        raise(Errc::invalid_argument, "mixture_channel: weights and channels must be non-empty and aligned");
    check_probability_vector(weights);

    const std::size_t dim_in = channels.front().dim_in();
    const std::size_t dim_out = channels.front().dim_out();
    std::vector<Matrix> kraus;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].dim_in() != dim_in || channels[i].dim_out() != dim_out)
            raise(Errc::dimension_mismatch, "mixture_channel: channels must share dimensions");
        const double scale = std::sqrt(weights[i]);
        for (const Matrix& k : channels[i].kraus()) {
            Matrix scaled = k;
            scaled *= Complex(scale, 0.0);
            kraus.push_back(std::move(scaled));
        }
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

std::vector<double> fourier_phases(std::size_t dim_in, std::size_t dim_out) {
    std::vector<double> phases(dim_in * dim_out, 0.0);
    for (std::size_t j = 0; j < dim_in; ++j)
        for (std::size_t alpha = 0; alpha < dim_out; ++alpha)
            phases[j * dim_out + alpha] =
                2.0 * M_PI * static_cast<double>(j) * static_cast<double>(alpha) / static_cast<double>(dim_out);
    return phases;
}

namespace {

std::vector<double> resolved_phases(const MaxCoherentSpec& spec) {
    if (spec.dim_in == 0 || spec.dim_out == 0) raise(Errc::invalid_argument, "max_coherent: zero dimension");
    if (spec.phases.empty()) return std::vector<double>(spec.dim_in * spec.dim_out, 0.0);
    if (spec.phases.size() != spec.dim_in * spec.dim_out)
        raise(Errc::invalid_argument, "max_coherent: phases must have |A|*|B| entries");
    return spec.phases;
}

} // namespace

ChoiMatrix max_coherent_choi(const MaxCoherentSpec& spec) {
    const std::vector<double> phases = resolved_phases(spec);
    const std::size_t d = spec.dim_in * spec.dim_out;
    std::vector<Complex> psi(d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) psi[i] = Complex(std::cos(phases[i]), std::sin(phases[i])) * amp;

    Matrix j(d, d);
    const double scale = static_cast<double>(spec.dim_in);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) j(r, c) = scale * psi[r] * std::conj(psi[c]);
    return ChoiMatrix(spec.dim_in, spec.dim_out, std::move(j));
}

QuantumChannel max_coherent_channel(const MaxCoherentSpec& spec) {
    const std::vector<double> phases = resolved_phases(spec);
    Matrix v(spec.dim_out, spec.dim_in);
    const double amp = 1.0 / std::sqrt(static_cast<double>(spec.dim_out));
    for (std::size_t j = 0; j < spec.dim_in; ++j)
        for (std::size_t alpha = 0; alpha < spec.dim_out; ++alpha) {
            const double theta = phases[j * spec.dim_out + alpha];
            v(alpha, j) = Complex(std::cos(theta), std::sin(theta)) * amp;
        }
    return QuantumChannel::from_kraus({std::move(v)});
}

ExampleChannels example_channels() {
    MaxCoherentSpec s1{2, 2, fourier_phases(2, 2)};
    MaxCoherentSpec s2{2, 3, fourier_phases(2, 3)};
    QuantumChannel phi1 = max_coherent_channel(s1);
    QuantumChannel phi2 = max_coherent_channel(s2);
    QuantumChannel phi_mix = direct_sum({0.5, 0.5}, {phi1, phi2});

    // Trace-preserving variant of the reference operator: diagonal Choi with
    // 1/2 on the B1 positions of each j-block.
    Matrix j0(10, 10);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t alpha = 0; alpha < 2; ++alpha) j0(j * 5 + alpha, j * 5 + alpha) = 0.5;
    QuantumChannel phi0 = QuantumChannel::from_choi(ChoiMatrix(2, 5, std::move(j0)));

    return ExampleChannels{std::move(phi1), std::move(phi2), std::move(phi0), std::move(phi_mix)};
}

ChoiMatrix example_phi0_subnormalized() {
    Matrix j0(10, 10);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t alpha = 0; alpha < 2; ++alpha) j0(j * 5 + alpha, j * 5 + alpha) = 0.25;
    return ChoiMatrix(2, 5, std::move(j0));
}

} // namespace chancoh
