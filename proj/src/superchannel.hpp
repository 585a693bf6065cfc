#pragma once

#include "channel.hpp"
#include "matrix.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chancoh {

struct Dims {
    std::size_t a = 1;
    std::size_t b = 1;
    std::size_t total() const { return a * b; }
    friend bool operator==(const Dims& x, const Dims& y) { return x.a == y.a && x.b == y.b; }
};

/// The defining column-sparse structure of an incoherent superchannel:
/// per Kraus operator, the row target f(j,alpha) and amplitude of each column.
struct IncoherentKrausStructure {
    struct PerKraus {
        std::vector<std::ptrdiff_t> target_row; // -1 when the column is zero
        std::vector<Complex> amplitude;
    };
    std::vector<PerKraus> kraus;
};

/// Result of a deterministic superchannel application: the rescaled output
/// Choi matrix plus its invariant report. The proof constructions are only
/// guaranteed to produce valid channels on their intended domains, so
/// validity is reported rather than assumed.
struct SuperchannelOutput {
    ChoiMatrix choi;
    ValidationReport report;
};

struct Outcome {
    double probability = 0.0;
    ChoiMatrix choi;
    bool choi_valid = false;

    /// Strict conversion; throws when the outcome is not a valid channel.
    QuantumChannel channel() const;
};

struct OutcomeEnsemble {
    std::vector<Outcome> outcomes;
};

/// Kraus family {M_m}, each (|A'||B'|) x (|A||B|), acting on Choi matrices as
/// J -> sum_m M_m J M_m^dagger. Complete (sum M^dagger M = I) unless
/// explicitly constructed sub-normalized.
class Superchannel {
public:
    static Superchannel from_kraus(Dims dims_in, Dims dims_out, std::vector<Matrix> kraus,
                                   bool subnormalized = false);

    Dims dims_in() const { return dims_in_; }
    Dims dims_out() const { return dims_out_; }
    const std::vector<Matrix>& kraus() const { return kraus_; }
    bool subnormalized() const { return subnormalized_; }

    /// Unscaled sum_m M_m J M_m^dagger; the raw object the worked proofs use.
    Matrix apply_raw(const Matrix& j) const;

    /// (|A'|/|A|) sum_m M_m J M_m^dagger with the output invariant report.
    SuperchannelOutput apply_choi(const ChoiMatrix& j) const;

    /// Strict application; throws not_superchannel_output when the result
    /// fails the Choi invariants on this input.
    QuantumChannel apply(const QuantumChannel& phi) const;

    /// Selective application per p_m = tr(M_m J M_m^dagger)/|A'| and
    /// J_m = |A'| M_m J M_m^dagger / tr(...). Outcomes below 1e-12 are
    /// dropped; a raw probability sum off 1 by more than 1e-9 is an error.
    OutcomeEnsemble selective_apply(const ChoiMatrix& j) const;
    OutcomeEnsemble selective_apply(const QuantumChannel& phi) const;

    /// Column sparsity check on this Kraus expression (at most one nonzero
    /// entry per column). Deciding existence over all expressions is not
    /// attempted.
    std::optional<IncoherentKrausStructure> incoherent_structure(double tol = 1e-12) const;
    bool is_incoherent(double tol = 1e-12) const;

private:
    Superchannel(Dims dims_in, Dims dims_out, std::vector<Matrix> kraus, bool subnormalized)
        : dims_in_(dims_in), dims_out_(dims_out), kraus_(std::move(kraus)), subnormalized_(subnormalized) {}

    Dims dims_in_;
    Dims dims_out_;
    std::vector<Matrix> kraus_;
    bool subnormalized_;
};

Superchannel identity_superchannel(Dims dims);

/// Theta1 = {Q1, Q2}: complementary 0/1 diagonal projectors selecting the B1
/// rows (Q1) and B2 rows (Q2) of every j-block.
Superchannel projector_pair_q(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2);

/// Single-Kraus J -> P J P^dagger for a permutation of the |A||B| indices.
Superchannel permutation_superchannel(Dims dims, const std::vector<std::size_t>& perm);

/// Permutation taking the interleaved direct-sum layout (j, (i, alpha_i)) to
/// the block layout (+)_i (j, alpha_i); realizes the P families used to
/// shuttle between J_Phi and (+)_i p_i J_i.
std::vector<std::size_t> interleave_to_blocks_permutation(std::size_t dim_a,
                                                          const std::vector<std::size_t>& dim_bs);

/// Theta1-bar: moves the AB1 rows of the interleaved layout to the leading
/// |A||B1| positions (single composed permutation).
Superchannel compaction_permutation(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2);

/// Theta2: isometric embedding C_{AB1} -> C_{AB}, <j|M0|k> = delta_{jk}.
Superchannel embed_superchannel(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2);

/// Theta3: compression C_{AB} -> C_{AB1}; chunked shifts
/// <j|M_n|k> = delta_{j, k - n |A||B1|}, n = 0..ceil(|B2|/|B1|).
Superchannel compress_superchannel(std::size_t dim_a, std::size_t dim_b1, std::size_t dim_b2);

/// Theta4: Kraus {U_m (x) M_m} with U_m the cyclic shift on the m-control.
Superchannel controlled_shift_superchannel(std::size_t control_count, const Superchannel& inner);

/// Theta5: Kraus {|0><m| (x) I_blockDim} collapsing an M-block direct sum
/// onto the first block.
Superchannel merge_superchannel(std::size_t control_count, std::size_t block_dim);

/// Kraus products {M2 M1}: applies first, then second.
Superchannel compose(const Superchannel& second, const Superchannel& first);

/// U_n = sum_k e^{i(theta_{(k+n) mod d} - theta_k)} |(k+n) mod d><k|;
/// each fixes the max-coherent state and the family averages diagonals to
/// (tr D / d) I.
std::vector<Matrix> twirl_unitaries(std::size_t dim, const std::vector<double>& phases);

} // namespace chancoh
