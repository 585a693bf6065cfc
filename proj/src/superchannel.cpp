#include "superchannel.hpp"

#include "error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace chancoh {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kProbabilitySumTol = 1e-9;
constexpr double kOutcomeCutoff = 1e-12;

} // namespace

QuantumChannel Outcome::channel() const {
    if (!choi_valid) raise(Errc::invalid_choi, "Outcome::channel: outcome Choi matrix fails invariants");
    return QuantumChannel::from_choi(choi);
}

Superchannel Superchannel::from_kraus(Dims dims_in, Dims dims_out, std::vector<Matrix> kraus,
                                      bool subnormalized) {
    if (kraus.empty()) raise(Errc::invalid_argument, "Superchannel: empty Kraus family");
    if (dims_in.total() == 0 || dims_out.total() == 0) raise(Errc::invalid_argument, "Superchannel: zero dimension");
    for (const Matrix& m : kraus)
        if (m.rows() != dims_out.total() || m.cols() != dims_in.total())
            raise(Errc::dimension_mismatch, "Superchannel: Kraus shape does not match declared dimensions");

    if (!subnormalized) {
        Matrix sum(dims_in.total(), dims_in.total());
        for (const Matrix& m : kraus) sum += m.adjoint() * m;
        const double err = max_abs_diff(sum, Matrix::identity(dims_in.total()));
        if (err > kCompletenessTol)
            raise(Errc::incomplete_kraus,
                  "Superchannel: sum M^dagger M deviates from identity by " + std::to_string(err) +
                      " (pass subnormalized=true for restricted constructions)");
    }
    return Superchannel(dims_in, dims_out, std::move(kraus), subnormalized);
}

Matrix Superchannel::apply_raw(const Matrix& j) const {
    if (j.rows() != dims_in_.total() || j.cols() != dims_in_.total())
        raise(Errc::dimension_mismatch, "apply_raw: input dimension mismatch");
    Matrix out(dims_out_.total(), dims_out_.total());
    for (const Matrix& m : kraus_) out += m * j * m.adjoint();
    return out;
}

SuperchannelOutput Superchannel::apply_choi(const ChoiMatrix& j) const {
    if (j.dim_in() * j.dim_out() != dims_in_.total())
        raise(Errc::dimension_mismatch, "apply_choi: input dimension mismatch");
    Matrix out = apply_raw(j.matrix());
    const double scale = static_cast<double>(dims_out_.a) / static_cast<double>(dims_in_.a);
    out *= Complex(scale, 0.0);
    ChoiMatrix choi(dims_out_.a, dims_out_.b, std::move(out));
    ValidationReport report = choi.validate();
    return SuperchannelOutput{std::move(choi), report};
}

QuantumChannel Superchannel::apply(const QuantumChannel& phi) const {
    SuperchannelOutput out = apply_choi(phi.choi());
    if (!out.report.valid())
        raise(Errc::not_superchannel_output,
              std::string("apply: output fails Choi invariant '") + out.report.first_failure() +
                  "' on this input");
    return QuantumChannel::from_choi(out.choi);
}

OutcomeEnsemble Superchannel::selective_apply(const ChoiMatrix& j) const {
    if (subnormalized_)
        raise(Errc::incomplete_kraus, "selective_apply: requires a complete Kraus family");
    if (j.dim_in() * j.dim_out() != dims_in_.total())
        raise(Errc::dimension_mismatch, "selective_apply: input dimension mismatch");

    const double dim_a_out = static_cast<double>(dims_out_.a);
    std::vector<Matrix> raw;
    std::vector<double> traces;
    double sum = 0.0;
    raw.reserve(kraus_.size());
    for (const Matrix& m : kraus_) {
        Matrix t = m * j.matrix() * m.adjoint();
        const double tr = t.trace().real();
        traces.push_back(tr);
        raw.push_back(std::move(t));
        sum += tr / dim_a_out;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTol)
        raise(Errc::normalization_mismatch,
              "selective_apply: outcome probabilities sum to " + std::to_string(sum) +
                  " (input/output dimensions are incompatible with the Born rule)");

    OutcomeEnsemble ensemble;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double p = traces[i] / dim_a_out;
        if (p < kOutcomeCutoff) continue;
        Matrix scaled = std::move(raw[i]);
        scaled *= Complex(dim_a_out / traces[i], 0.0);
        ChoiMatrix choi(dims_out_.a, dims_out_.b, std::move(scaled));
        const bool valid = choi.is_valid();
        ensemble.outcomes.push_back(Outcome{p, std::move(choi), valid});
    }
    return ensemble;
}

OutcomeEnsemble Superchannel::selective_apply(const QuantumChannel& phi) const {
    return selective_apply(phi.choi());
}

std::optional<IncoherentKrausStructure> Superchannel::incoherent_structure(double tol) const {
    IncoherentKrausStructure structure;
    for (const Matrix& m : kraus_) {
        IncoherentKrausStructure::PerKraus entry;
        entry.target_row.assign(m.cols(), -1);
        entry.amplitude.assign(m.cols(), Complex(0.0, 0.0));
        for (std::size_t col = 0; col < m.cols(); ++col) {
            for (std::size_t row = 0; row < m.rows(); ++row) {
                if (std::abs(m(row, col)) <= tol) continue;
                if (entry.target_row[col] >= 0) return std::nullopt; // second nonzero in a column
                entry.target_row[col] = static_cast<std::ptrdiff_t>(row);
                entry.amplitude[col] = m(row, col);
            }
        }
        structure.kraus.push_back(std::move(entry));
    }
    return structure;
}

bool Superchannel::is_incoherent(double tol) const { return incoherent_structure(tol).has_value(); }

Superchannel identity_superchannel(Dims dims) {
    return Superchannel::from_kraus(dims, dims, {Matrix::identity(dims.total())});
}

Superchannel projector_pair_q(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2) {
    if (dim_a == 0 || dim_b1 == 0 || dim_b2 == 0)
        raise(Errc::invalid_argument, "projector_pair_q: dimensions must be >= 1");
    const std::size_t dim_b = dim_b1 + dim_b2;
    const std::size_t d = dim_a * dim_b;
    Matrix q1(d, d);
    Matrix q2(d, d);
    for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t alpha = 0; alpha < dim_b; ++alpha) {
            const std::size_t idx = j * dim_b + alpha;
            (alpha < dim_b1 ? q1 : q2)(idx, idx) = 1.0;
        }
    return Superchannel::from_kraus(Dims{dim_a, dim_b}, Dims{dim_a, dim_b}, {std::move(q1), std::move(q2)});
}

Superchannel permutation_superchannel(Dims dims, const std::vector<std::size_t>& perm) {
    const std::size_t d = dims.total();
    if (perm.size() != d) raise(Errc::invalid_argument, "permutation_superchannel: wrong permutation length");
    std::vector<bool> seen(d, false);
    for (std::size_t t : perm) {
        if (t >= d || seen[t]) raise(Errc::invalid_argument, "permutation_superchannel: not a permutation");
        seen[t] = true;
    }
    Matrix p(d, d);
    for (std::size_t i = 0; i < d; ++i) p(perm[i], i) = 1.0;
    return Superchannel::from_kraus(dims, dims, {std::move(p)});
}

std::vector<std::size_t> interleave_to_blocks_permutation(std::size_t dim_a,
                                                          const std::vector<std::size_t>& dim_bs) {
    std::size_t dim_b = 0;
    for (std::size_t b : dim_bs) dim_b += b;
    if (dim_a == 0 || dim_b == 0) raise(Errc::invalid_argument, "interleave_to_blocks: zero dimension");

    std::vector<std::size_t> perm(dim_a * dim_b, 0);
    std::size_t inner_offset = 0;  // offset of summand i inside each j-block
    std::size_t block_offset = 0;  // offset of summand i's block in the sorted layout
    for (std::size_t i = 0; i < dim_bs.size(); ++i) {
        const std::size_t bi = dim_bs[i];
        for (std::size_t j = 0; j < dim_a; ++j)
            for (std::size_t alpha = 0; alpha < bi; ++alpha)
                perm[j * dim_b + inner_offset + alpha] = block_offset + j * bi + alpha;
        inner_offset += bi;
        block_offset += dim_a * bi;
    }
    return perm;
}

Superchannel compaction_permutation(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2) {
    if (dim_a == 0 || dim_b1 == 0) raise(Errc::invalid_argument, "compaction_permutation: dimensions must be >= 1");
    std::vector<std::size_t> dim_bs{dim_b1};
    if (dim_b2 > 0) dim_bs.push_back(dim_b2);
    const Dims dims{dim_a, dim_b1 + dim_b2};
    return permutation_superchannel(dims, interleave_to_blocks_permutation(dim_a, dim_bs));
}

Superchannel embed_superchannel(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2) {
    if (dim_a == 0 || dim_b1 == 0) raise(Errc::invalid_argument, "embed_superchannel: dimensions must be >= 1");
    const std::size_t din = dim_a * dim_b1;
    const std::size_t dout = dim_a * (dim_b1 + dim_b2);
    Matrix m0(dout, din);
    for (std::size_t k = 0; k < din; ++k) m0(k, k) = 1.0;
    return Superchannel::from_kraus(Dims{dim_a, dim_b1}, Dims{dim_a, dim_b1 + dim_b2}, {std::move(m0)});
}

Superchannel compress_superchannel(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2) {
    if (dim_a == 0 || dim_b1 == 0) raise(Errc::invalid_argument, "compress_superchannel: dimensions must be >= 1");
    const std::size_t chunk = dim_a * dim_b1;
    const std::size_t din = dim_a * (dim_b1 + dim_b2);
    const std::size_t n_max = (dim_b2 + dim_b1 - 1) / dim_b1; // ceil(|B2|/|B1|)
    std::vector<Matrix> kraus;
    for (std::size_t n = 0; n <= n_max; ++n) {
        Matrix m(chunk, din);
        bool nonzero = false;
        for (std::size_t j = 0; j < chunk; ++j) {
            const std::size_t k = j + n * chunk;
            if (k >= din) break;
            m(j, k) = 1.0;
            nonzero = true;
        }
        if (nonzero) kraus.push_back(std::move(m));
    }
    return Superchannel::from_kraus(Dims{dim_a, dim_b1 + dim_b2}, Dims{dim_a, dim_b1}, std::move(kraus));
}

Superchannel controlled_shift_superchannel(std::size_t control_count, const Superchannel& inner) {
    if (control_count == 0) raise(Errc::invalid_argument, "controlled_shift: control dimension must be >= 1");
    if (inner.kraus().size() != control_count)
        raise(Errc::dimension_mismatch,
              "controlled_shift: inner superchannel must have exactly one Kraus operator per control value");
    if (!inner.is_incoherent())
        raise(Errc::invalid_argument, "controlled_shift: inner superchannel must have incoherent structure");

    std::vector<Matrix> kraus;
    for (std::size_t m = 0; m < control_count; ++m) {
        Matrix shift(control_count, control_count);
        for (std::size_t k = 0; k < control_count; ++k) shift((k + m) % control_count, k) = 1.0;
        kraus.push_back(kron(shift, inner.kraus()[m]));
    }
    const Dims din{control_count * inner.dims_in().a, inner.dims_in().b};
    const Dims dout{control_count * inner.dims_out().a, inner.dims_out().b};
    return Superchannel::from_kraus(din, dout, std::move(kraus), inner.subnormalized());
}

Superchannel merge_superchannel(std::size_t control_count, std::size_t block_dim) {
    if (control_count == 0 || block_dim == 0)
        raise(Errc::invalid_argument, "merge_superchannel: dimensions must be >= 1");
    std::vector<Matrix> kraus;
    for (std::size_t m = 0; m < control_count; ++m) {
        Matrix pick(control_count, control_count);
        pick(0, m) = 1.0;
        kraus.push_back(kron(pick, Matrix::identity(block_dim)));
    }
    const Dims dims{control_count, block_dim};
    return Superchannel::from_kraus(dims, dims, std::move(kraus));
}

Superchannel compose(const Superchannel& second, const Superchannel& first) {
    if (second.dims_in().total() != first.dims_out().total())
        raise(Errc::dimension_mismatch, "compose: inner dimensions disagree");
    std::vector<Matrix> kraus;
    kraus.reserve(first.kraus().size() * second.kraus().size());
    for (const Matrix& m2 : second.kraus())
        for (const Matrix& m1 : first.kraus()) kraus.push_back(m2 * m1);
    return Superchannel::from_kraus(first.dims_in(), second.dims_out(), std::move(kraus),
                                    first.subnormalized() || second.subnormalized());
}

std::vector<Matrix> twirl_unitaries(std::size_t dim, const std::vector<double>& phases) {
    if (phases.size() != dim) raise(Errc::invalid_argument, "twirl_unitaries: phases length must equal dim");
    std::vector<Matrix> out;
    out.reserve(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        Matrix u(dim, dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const std::size_t target = (k + n) % dim;
            const double theta = phases[target] - phases[k];
            u(target, k) = Complex(std::cos(theta), std::sin(theta));
        }
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace chancoh
