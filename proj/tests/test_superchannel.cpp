#include "superchannel.hpp"

#include "error.hpp"
#include "harness.hpp"
#include "measures.hpp"
#include "oracles.hpp"
#include "rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace chancoh;

namespace {

// phi1 padded into C_{AB}: phi1(|j><k|) (+) 0.
QuantumChannel padded_channel(const QuantumChannel& phi, std::size_t extra_dim) {
    const std::size_t dim_out = phi.dim_out() + extra_dim;
    std::vector<Matrix> kraus;
    for (const Matrix& k : phi.kraus()) {
        Matrix lifted(dim_out, phi.dim_in());
        for (std::size_t r = 0; r < k.rows(); ++r)
            for (std::size_t c = 0; c < k.cols(); ++c) lifted(r, c) = k(r, c);
        kraus.push_back(std::move(lifted));
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

Matrix embed_top_left(const Matrix& block, std::size_t dim) {
    Matrix out(dim, dim);
    for (std::size_t r = 0; r < block.rows(); ++r)
        for (std::size_t c = 0; c < block.cols(); ++c) out(r, c) = block(r, c);
    return out;
}

} // namespace

TEST_CASE("superchannel construction and completeness") {
    const Superchannel id = identity_superchannel(Dims{2, 2});
    CHECK(id.kraus().size() == 1);

    const Superchannel q = projector_pair_q(2, 2, 3);
    Matrix sum(10, 10);
    for (const Matrix& m : q.kraus()) sum += m.adjoint() * m;
    CHECK(max_abs_diff(sum, Matrix::identity(10)) < 1e-14);

    Matrix half = Matrix::identity(4);
    half *= Complex(0.5, 0.0);
    CHECK_THROWS_AS(Superchannel::from_kraus(Dims{2, 2}, Dims{2, 2}, {half}), Error);
    CHECK_NOTHROW(Superchannel::from_kraus(Dims{2, 2}, Dims{2, 2}, {half}, /*subnormalized=*/true));
}

TEST_CASE("projector pair selects the B1/B2 rows") {
    const Superchannel unit = projector_pair_q(1, 1, 1);
    CHECK(unit.kraus()[0](0, 0) == Complex(1.0, 0.0));
    CHECK(unit.kraus()[1](1, 1) == Complex(1.0, 0.0));

    const Superchannel q = projector_pair_q(2, 2, 3);
    const Matrix& q1 = q.kraus()[0];
    for (const std::size_t idx : {0u, 1u, 5u, 6u}) CHECK(q1(idx, idx) == Complex(1.0, 0.0));
    CHECK(q1.trace().real() == doctest::Approx(4.0));

    Rng rng(301);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t a = 1 + rng.below(3);
        const std::size_t b1 = 1 + rng.below(3);
        const std::size_t b2 = 1 + rng.below(3);
        const Superchannel pair = projector_pair_q(a, b1, b2);
        const Matrix product = pair.kraus()[0] * pair.kraus()[1];
        CHECK(product.max_abs() == 0.0);
    }
}

TEST_CASE("identity superchannel leaves channels alone") {
    const QuantumChannel phi = random_channel(2, 2, 2, 42);
    const Superchannel id = identity_superchannel(Dims{2, 2});
    CHECK(max_abs_diff(id.apply(phi).choi().matrix(), phi.choi().matrix()) < 1e-12);

    const OutcomeEnsemble single = id.selective_apply(phi);
    REQUIRE(single.outcomes.size() == 1);
    CHECK(single.outcomes[0].probability == doctest::Approx(1.0));
    CHECK(max_abs_diff(single.outcomes[0].choi.matrix(), phi.choi().matrix()) < 1e-12);
}

TEST_CASE("selective projector pair splits a direct sum into its parts") {
    Rng rng(302);
    const double p = 0.3;
    const QuantumChannel phi1 = random_channel(2, 2, 2, 7);
    const QuantumChannel phi2 = random_channel(2, 3, 2, 8);
    const QuantumChannel combined = direct_sum({p, 1.0 - p}, {phi1, phi2});

    const Superchannel q = projector_pair_q(2, 2, 3);
    const OutcomeEnsemble outcomes = q.selective_apply(combined);
    REQUIRE(outcomes.outcomes.size() == 2);
    CHECK(outcomes.outcomes[0].probability == doctest::Approx(p).epsilon(1e-10));
    CHECK(outcomes.outcomes[1].probability == doctest::Approx(1.0 - p).epsilon(1e-10));
    CHECK(outcomes.outcomes[0].choi_valid);
    CHECK(outcomes.outcomes[1].choi_valid);

    // First outcome is phi1-tilde = phi1 (+) 0.
    const QuantumChannel tilde1 = padded_channel(phi1, 3);
    CHECK(max_abs_diff(outcomes.outcomes[0].choi.matrix(), tilde1.choi().matrix()) < 1e-9);

    const ExampleChannels ex = example_channels();
    const OutcomeEnsemble half = q.selective_apply(ex.phi_mix);
    REQUIRE(half.outcomes.size() == 2);
    CHECK(half.outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(half.outcomes[1].probability == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("incoherent structure detection") {
    CHECK(projector_pair_q(2, 2, 3).is_incoherent());
    CHECK(identity_superchannel(Dims{2, 2}).is_incoherent());

    const auto perm = interleave_to_blocks_permutation(2, {2, 3});
    CHECK(permutation_superchannel(Dims{2, 5}, perm).is_incoherent());

    // A Hadamard-like Kraus operator has two nonzero entries per column.
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h(0, 0) = s;
    h(0, 1) = s;
    h(1, 0) = s;
    h(1, 1) = -s;
    const Superchannel dense = Superchannel::from_kraus(Dims{1, 2}, Dims{1, 2}, {h});
    CHECK_FALSE(dense.is_incoherent());

    const auto structure = projector_pair_q(1, 1, 1).incoherent_structure();
    REQUIRE(structure.has_value());
    CHECK(structure->kraus.size() == 2);
    CHECK(structure->kraus[0].target_row[0] == 0);
    CHECK(structure->kraus[0].target_row[1] == -1);
}

TEST_CASE("compaction permutation moves the AB1 content to the leading block") {
    SUBCASE("no B2 block means identity") {
        const Superchannel id = compaction_permutation(2, 2, 0);
        CHECK(max_abs_diff(id.kraus()[0], Matrix::identity(4)) < 1e-15);
    }

    const ExampleChannels ex = example_channels();
    const QuantumChannel tilde1 = padded_channel(ex.phi1, 3);
    const Superchannel compaction = compaction_permutation(2, 2, 3);
    const SuperchannelOutput out = compaction.apply_choi(tilde1.choi());

    const Matrix expected = embed_top_left(ex.phi1.choi().matrix(), 10);
    CHECK(max_abs_diff(out.choi.matrix(), expected) < 1e-12);
    // The compacted gadget is not a valid AB Choi matrix; that is reported,
    // not hidden.
    CHECK_FALSE(out.report.trace_preserving);
    CHECK(out.report.psd);
    CHECK_THROWS_AS(compaction.apply(tilde1), Error);

    // Relabeling preserves the l1 measure.
    CHECK(l1_coherence(out.choi) == doctest::Approx(l1_coherence(tilde1.choi())).epsilon(1e-12));
}

TEST_CASE("embedding matches compaction and is isometric") {
    SUBCASE("no B2 block means identity") {
        const Superchannel id = embed_superchannel(2, 2, 0);
        CHECK(max_abs_diff(id.kraus()[0], Matrix::identity(4)) < 1e-15);
    }

    const ExampleChannels ex = example_channels();
    const Superchannel embed = embed_superchannel(2, 2, 3);
    REQUIRE(embed.kraus().size() == 1);
    const Matrix& m0 = embed.kraus()[0];
    CHECK(max_abs_diff(m0.adjoint() * m0, Matrix::identity(4)) < 1e-15);
    // M0 M0^dagger is a projector, not the identity: the adjoint direction is
    // never applied.
    const Matrix mm = m0 * m0.adjoint();
    CHECK(max_abs_diff(mm * mm, mm) < 1e-15);

    const Matrix embedded = embed.apply_raw(ex.phi1.choi().matrix());
    const QuantumChannel tilde1 = padded_channel(ex.phi1, 3);
    const Matrix compacted = compaction_permutation(2, 2, 3).apply_raw(tilde1.choi().matrix());
    CHECK(max_abs_diff(embedded, compacted) < 1e-12);
}

TEST_CASE("compression undoes the embedding") {
    const ExampleChannels ex = example_channels();
    const Superchannel compress = compress_superchannel(2, 2, 3);

    // Complete family.
    Matrix sum(10, 10);
    for (const Matrix& m : compress.kraus()) sum += m.adjoint() * m;
    CHECK(max_abs_diff(sum, Matrix::identity(10)) < 1e-14);

    const Matrix gadget = embed_top_left(ex.phi1.choi().matrix(), 10);
    CHECK(max_abs_diff(compress.apply_raw(gadget), ex.phi1.choi().matrix()) < 1e-12);

    // The n = 0 term alone already reproduces J_phi1 on this domain.
    const Matrix& m0 = compress.kraus()[0];
    CHECK(max_abs_diff(m0 * gadget * m0.adjoint(), ex.phi1.choi().matrix()) < 1e-12);

    SUBCASE("compress after embed is the identity on random channels") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const std::size_t b1 = 1 + seed % 3;
            const std::size_t b2 = 1 + seed % 4;
            const std::size_t a = 1 + seed % 2;
            const QuantumChannel phi = random_channel(a, b1, 1 + seed % 2, seed);
            const Superchannel chain =
                compose(compress_superchannel(a, b1, b2), embed_superchannel(a, b1, b2));
            const SuperchannelOutput out = chain.apply_choi(phi.choi());
            CHECK(max_abs_diff(out.choi.matrix(), phi.choi().matrix()) < 1e-10);
            CHECK(out.report.valid());
        }
    }
}

TEST_CASE("controlled shift builds the block-tagged ensemble") {
    SUBCASE("single control value is the inner superchannel") {
        Matrix sole = Matrix::identity(4);
        const Superchannel inner = Superchannel::from_kraus(Dims{2, 2}, Dims{2, 2}, {sole});
        const Superchannel theta = controlled_shift_superchannel(1, inner);
        CHECK(max_abs_diff(theta.kraus()[0], Matrix::identity(4)) < 1e-15);
    }

    const double p = 0.4;
    const QuantumChannel phi1 = random_channel(2, 2, 2, 11);
    const QuantumChannel phi2 = random_channel(2, 3, 1, 12);
    const QuantumChannel combined = direct_sum({p, 1.0 - p}, {phi1, phi2});
    const Superchannel q = projector_pair_q(2, 2, 3);
    const Superchannel theta4 = controlled_shift_superchannel(2, q);
    CHECK(theta4.is_incoherent());

    // Input gadget |0><0| (x) J_Phi.
    const Matrix j = combined.choi().matrix();
    Matrix lifted(20, 20);
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t c = 0; c < 10; ++c) lifted(r, c) = j(r, c);
    const Matrix out = theta4.apply_raw(lifted);

    // Expected: (+)_m Q_m J Q_m, the m-th block tagged by the control.
    Matrix expected(20, 20);
    for (std::size_t m = 0; m < 2; ++m) {
        const Matrix& qm = q.kraus()[m];
        const Matrix block = qm * j * qm.adjoint();
        for (std::size_t r = 0; r < 10; ++r)
            for (std::size_t c = 0; c < 10; ++c) expected(m * 10 + r, m * 10 + c) = block(r, c);
    }
    CHECK(max_abs_diff(out, expected) < 1e-12);
}

TEST_CASE("the selective pipeline rearranges tagged outcomes into a direct sum") {
    // Pad -> block-sort -> controlled shift -> resort: the tagged ensemble
    // sum_m p_m |m><m| (x) J_m becomes the Choi matrix of the direct-sum
    // channel (+)_m p_m phi_m up to a single relabeling permutation.
    const QuantumChannel phi = random_channel(2, 5, 2, 77);
    const Matrix j = phi.choi().matrix();
    const Superchannel q = projector_pair_q(2, 2, 3);

    // |0><0| (x) J via the padding permutation on two B-sized summands.
    Matrix lifted(20, 20);
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t c = 0; c < 10; ++c) lifted(r, c) = j(r, c);

    const Superchannel theta4 = controlled_shift_superchannel(2, q);
    const Matrix tagged = theta4.apply_raw(lifted);

    // Relabel (m, j, alpha) -> (j, (m, alpha)).
    std::vector<std::size_t> relabel(20);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t jj = 0; jj < 2; ++jj)
            for (std::size_t alpha = 0; alpha < 5; ++alpha)
                relabel[m * 10 + jj * 5 + alpha] = jj * 10 + m * 5 + alpha;
    Matrix p(20, 20);
    for (std::size_t i = 0; i < 20; ++i) p(relabel[i], i) = 1.0;
    const Matrix sorted = p * tagged * p.adjoint();

    // Expected: the interleaved direct sum of the Q-block restrictions.
    Matrix expected(20, 20);
    for (std::size_t m = 0; m < 2; ++m) {
        const Matrix& qm = q.kraus()[m];
        const Matrix block = qm * j * qm.adjoint();
        for (std::size_t jj = 0; jj < 2; ++jj)
            for (std::size_t kk = 0; kk < 2; ++kk)
                for (std::size_t alpha = 0; alpha < 5; ++alpha)
                    for (std::size_t beta = 0; beta < 5; ++beta)
                        expected(jj * 10 + m * 5 + alpha, kk * 10 + m * 5 + beta) =
                            block(jj * 5 + alpha, kk * 5 + beta);
    }
    CHECK(max_abs_diff(sorted, expected) < 1e-12);

    // The weighted measure sum over the ensemble equals the measure of the
    // rearranged object for l1 (block-diagonal structure, orthogonal parts).
    const ChoiMatrix sorted_choi(2, 10, sorted);
    const OutcomeEnsemble outcomes = q.selective_apply(phi);
    double weighted = 0.0;
    for (const Outcome& o : outcomes.outcomes) weighted += o.probability * l1_coherence(o.choi);
    CHECK(weighted == doctest::Approx(l1_coherence(sorted_choi)).epsilon(1e-9));
}

TEST_CASE("merge collapses a block direct sum onto the first block") {
    SUBCASE("single block is the identity") {
        const Superchannel id = merge_superchannel(1, 4);
        CHECK(max_abs_diff(id.kraus()[0], Matrix::identity(4)) < 1e-15);
    }

    const QuantumChannel a = random_channel(2, 2, 2, 21);
    const QuantumChannel b = random_channel(2, 2, 1, 22);
    const Matrix ja = a.choi().matrix();
    const Matrix jb = b.choi().matrix();
    Matrix block_sum(8, 8);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            block_sum(r, c) = 0.3 * ja(r, c);
            block_sum(4 + r, 4 + c) = 0.7 * jb(r, c);
        }
    const Superchannel merge = merge_superchannel(2, 4);
    const Matrix merged = merge.apply_raw(block_sum);

    Matrix expected(8, 8);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) expected(r, c) = 0.3 * ja(r, c) + 0.7 * jb(r, c);
    CHECK(max_abs_diff(merged, expected) < 1e-12);
}

TEST_CASE("the convexity pipeline reproduces the padded mixture channel") {
    // Phi3 = (+)_m p_m phi_m -> block sort -> merge -> block unsort equals the
    // mixture channel padded with a zero block.
    const std::vector<double> weights{0.3, 0.7};
    const QuantumChannel phi_a = random_channel(2, 2, 2, 31);
    const QuantumChannel phi_b = random_channel(2, 2, 1, 32);
    const QuantumChannel phi3 = direct_sum(weights, {phi_a, phi_b});

    const auto perm = interleave_to_blocks_permutation(2, {2, 2});
    const Superchannel sort = permutation_superchannel(Dims{2, 4}, perm);
    const Superchannel merge = merge_superchannel(2, 4);

    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
    const Superchannel unsort = permutation_superchannel(Dims{2, 4}, inverse);

    const Superchannel pipeline = compose(unsort, compose(merge, sort));
    CHECK(pipeline.is_incoherent());
    const SuperchannelOutput out = pipeline.apply_choi(phi3.choi());

    const QuantumChannel mixed = mixture_channel(weights, {phi_a, phi_b});
    const QuantumChannel padded = padded_channel(mixed, 2);
    CHECK(max_abs_diff(out.choi.matrix(), padded.choi().matrix()) < 1e-12);
    CHECK(out.report.valid());
}

TEST_CASE("permutation superchannels preserve the closed-form measures") {
    Rng rng(303);
    for (int trial = 0; trial < 10; ++trial) {
        const QuantumChannel phi = random_channel(2, 3, 2, 400 + trial);
        const auto perm = rng.permutation(6);
        const Superchannel theta = permutation_superchannel(Dims{2, 3}, perm);
        const SuperchannelOutput out = theta.apply_choi(phi.choi());
        CHECK(std::abs(l1_coherence(out.choi) - l1_coherence(phi.choi())) < 1e-9);
        CHECK(std::abs(relative_entropy_coherence(out.choi) - relative_entropy_coherence(phi.choi())) <
              1e-9);
    }
    CHECK_THROWS_AS(permutation_superchannel(Dims{2, 2}, {0, 0, 1, 2}), Error);
}

TEST_CASE("twirl unitaries fix the max-coherent state and average diagonals") {
    Rng rng(304);
    std::vector<double> phases;
    for (int i = 0; i < 6; ++i) phases.push_back(rng.uniform(0.0, 2.0 * M_PI));
    const std::vector<Matrix> twirl = twirl_unitaries(6, phases);

    CHECK(max_abs_diff(twirl[0], Matrix::identity(6)) < 1e-15);

    // U_n |psi> = |psi> for the uniform-amplitude state with these phases.
    Matrix psi(6, 1);
    for (std::size_t i = 0; i < 6; ++i)
        psi(i, 0) = Complex(std::cos(phases[i]), std::sin(phases[i])) / std::sqrt(6.0);
    for (const Matrix& u : twirl) CHECK(max_abs_diff(u * psi, psi) < 1e-12);

    // (1/d) sum_n U_n D U_n^dagger = (tr D / d) I on random diagonals.
    Matrix diag(6, 6);
    double total = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const double x = rng.uniform(0.0, 1.0);
        diag(i, i) = x;
        total += x;
    }
    Matrix averaged(6, 6);
    for (const Matrix& u : twirl) averaged += u * diag * u.adjoint();
    averaged *= Complex(1.0 / 6.0, 0.0);
    Matrix expected = Matrix::identity(6);
    expected *= Complex(total / 6.0, 0.0);
    CHECK(max_abs_diff(averaged, expected) < 1e-12);
}

TEST_CASE("every named constructor yields an incoherent superchannel") {
    CHECK(identity_superchannel(Dims{2, 3}).is_incoherent());
    CHECK(projector_pair_q(2, 2, 3).is_incoherent());
    CHECK(compaction_permutation(2, 2, 3).is_incoherent());
    CHECK(embed_superchannel(2, 2, 3).is_incoherent());
    CHECK(compress_superchannel(2, 2, 3).is_incoherent());
    CHECK(merge_superchannel(3, 4).is_incoherent());
    CHECK(controlled_shift_superchannel(2, projector_pair_q(2, 2, 3)).is_incoherent());
    Rng rng(309);
    CHECK(permutation_superchannel(Dims{2, 4}, rng.permutation(8)).is_incoherent());
}

TEST_CASE("selective application rejects dimension-changing Born rules") {
    // |A| != |A'|: probabilities would sum to |A|/|A'|.
    const Superchannel embed = embed_superchannel(2, 2, 2); // 2x2 -> 2x4, |A| = |A'|: fine
    CHECK_NOTHROW(embed.selective_apply(random_channel(2, 2, 2, 51)));

    // Build an |A|-halving gadget: single Kraus mapping C_{2x2} onto C_{1x4}
    // columns; complete but probability-sum breaking.
    Matrix m = Matrix::identity(4);
    const Superchannel halving = Superchannel::from_kraus(Dims{2, 2}, Dims{1, 4}, {m});
    CHECK_THROWS_AS(halving.selective_apply(random_channel(2, 2, 2, 52)), Error);
    try {
        halving.selective_apply(random_channel(2, 2, 2, 52));
    } catch (const Error& e) {
        CHECK(e.code() == Errc::normalization_mismatch);
    }
}

TEST_CASE("weighted selective measures reproduce the direct-sum decomposition") {
    // C(Phi) = p1 C(phi1-tilde) + p2 C(phi2-tilde) for l1 and relative entropy.
    const ExampleChannels ex = example_channels();
    const Superchannel q = projector_pair_q(2, 2, 3);
    const OutcomeEnsemble outcomes = q.selective_apply(ex.phi_mix);
    REQUIRE(outcomes.outcomes.size() == 2);

    double weighted_l1 = 0.0;
    double weighted_rel = 0.0;
    for (const Outcome& o : outcomes.outcomes) {
        weighted_l1 += o.probability * l1_coherence(o.choi);
        weighted_rel += o.probability * relative_entropy_coherence(o.choi);
    }
    CHECK(weighted_l1 == doctest::Approx(l1_coherence(ex.phi_mix)).epsilon(1e-8));
    CHECK(weighted_rel == doctest::Approx(relative_entropy_coherence(ex.phi_mix)).epsilon(1e-8));
}
