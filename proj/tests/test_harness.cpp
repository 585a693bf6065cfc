#include "harness.hpp"

#include "error.hpp"
#include "oracles.hpp"
#include "rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace chancoh;

TEST_CASE("random channels are deterministic and valid") {
    const QuantumChannel a = random_channel(2, 3, 2, 1234);
    const QuantumChannel b = random_channel(2, 3, 2, 1234);
    CHECK(max_abs_diff(a.choi().matrix(), b.choi().matrix()) == 0.0);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t dim_a = 1 + seed % 3;
        const std::size_t dim_b = 1 + (seed / 3) % 3;
        const std::size_t kraus = std::max<std::size_t>(1 + seed % 4, (dim_a + dim_b - 1) / dim_b);
        const QuantumChannel ch = random_channel(dim_a, dim_b, kraus, seed);
        CHECK(ch.choi().is_valid());
    }

    // Single-Kraus square channels are unitary conjugations.
    const QuantumChannel unitary = random_channel(3, 3, 1, 9);
    REQUIRE(unitary.kraus().size() == 1);
    const Matrix& u = unitary.kraus()[0];
    CHECK(max_abs_diff(u.adjoint() * u, Matrix::identity(3)) < 1e-10);

    CHECK_THROWS_AS(random_channel(3, 2, 1, 0), Error); // 1*2 < 3: no isometry
}

TEST_CASE("random incoherent channels are incoherent and seed stable") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const QuantumChannel ch = random_incoherent_channel(2, 3, seed);
        CHECK(is_incoherent(ch));
        CHECK(ch.choi().is_valid());
        CHECK(l1_coherence(ch) < 1e-8);
        CHECK(relative_entropy_coherence(ch) < 1e-8);
    }
    const QuantumChannel a = random_incoherent_channel(3, 2, 77);
    const QuantumChannel b = random_incoherent_channel(3, 2, 77);
    CHECK(max_abs_diff(a.choi().matrix(), b.choi().matrix()) == 0.0);
}

TEST_CASE("random incoherent superchannels") {
    SUBCASE("single Kraus operator is a phase-decorated permutation") {
        const Superchannel theta = random_isc(Dims{2, 3}, 1, 3);
        CHECK(theta.kraus().size() == 1);
        CHECK(theta.is_incoherent());
        const Matrix& m = theta.kraus()[0];
        CHECK(max_abs_diff(m.adjoint() * m, Matrix::identity(6)) < 1e-12);
    }

    SUBCASE("completeness holds across samples") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const std::size_t count = 1 + seed % 5;
            const Superchannel theta = random_isc(Dims{2, 2 + seed % 2}, count, seed);
            CHECK(theta.kraus().size() == count);
            CHECK(theta.is_incoherent());
            Matrix sum(theta.dims_in().total(), theta.dims_in().total());
            for (const Matrix& m : theta.kraus()) sum += m.adjoint() * m;
            CHECK(max_abs_diff(sum, Matrix::identity(theta.dims_in().total())) < 1e-10);
        }
    }

    SUBCASE("incoherent channels stay incoherent") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const QuantumChannel ch = random_incoherent_channel(2, 3, seed);
            const Superchannel theta = random_isc(Dims{2, 3}, 1 + seed % 4, seed + 5000);
            const SuperchannelOutput out = theta.apply_choi(ch.choi());
            CHECK(out.report.valid());
            CHECK(is_incoherent(out.choi));
        }
    }

    SUBCASE("deterministic outputs are valid channels on valid inputs") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const QuantumChannel ch = random_channel(2, 3, 1 + seed % 3, seed);
            const Superchannel theta = random_isc(Dims{2, 3}, 2 * (1 + seed % 2), seed + 9000);
            CHECK(theta.apply_choi(ch.choi()).report.valid());
            const OutcomeEnsemble outcomes = theta.selective_apply(ch);
            double total = 0.0;
            for (const Outcome& o : outcomes.outcomes) total += o.probability;
            CHECK(std::abs(total - 1.0) < 1e-9);
        }
    }

    SUBCASE("unitary-mixture members give valid outcome channels") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const QuantumChannel ch = random_channel(2, 3, 1 + seed % 3, seed);
            const Superchannel theta = random_isc(Dims{2, 3}, 3, seed + 11000); // odd: no projector layer
            for (const Outcome& o : theta.selective_apply(ch).outcomes) CHECK(o.choi_valid);
        }
    }
}

TEST_CASE("closed-form measures pass every condition at 100 trials across dimensions") {
    const std::vector<std::pair<std::size_t, std::size_t>> dims{{2, 2}, {2, 3}, {3, 2}};
    const std::vector<Condition> conditions{Condition::C1, Condition::C2, Condition::C3, Condition::B3,
                                            Condition::B4};
    std::uint64_t seed = 1700;
    for (MeasureKind measure : {MeasureKind::l1, MeasureKind::relative_entropy}) {
        for (Condition condition : conditions) {
            for (const auto& [a, b] : dims) {
                const CheckReport report = check_condition(condition, measure, 100, a, b, seed++);
                CAPTURE(condition_name(condition));
                CAPTURE(measure_name(measure));
                CAPTURE(a);
                CAPTURE(b);
                CHECK(report.violations == 0);
            }
        }
    }
}

TEST_CASE("trace-distance measure passes C1, C2 and B4 on random instances") {
    const CheckReport c1 = check_condition(Condition::C1, MeasureKind::trace_distance, 100, 2, 2, 23);
    CHECK(c1.violations == 0);
    CHECK(c1.trials == 200); // both populations

    const CheckReport c2 = check_condition(Condition::C2, MeasureKind::trace_distance, 100, 2, 2, 24);
    CHECK(c2.violations == 0);

    const CheckReport b4 = check_condition(Condition::B4, MeasureKind::trace_distance, 30, 2, 2, 25);
    CHECK(b4.violations == 0);
}

TEST_CASE("check_condition flags the trace-distance additivity breach") {
    const CheckReport report = check_condition(Condition::C3, MeasureKind::trace_distance, 1, 2, 5, 0);
    CHECK(report.violations >= 1);
    // lhs - rhs = C_tr(phi_mix) - 19/12 = 3/2 - 19/12 = -1/12.
    CHECK(report.worst_gap == doctest::Approx(-1.0 / 12.0).epsilon(1e-2));
}

TEST_CASE("reports are bit-for-bit deterministic in the seed") {
    const CheckReport a = check_condition(Condition::C2, MeasureKind::l1, 25, 2, 3, 99);
    const CheckReport b = check_condition(Condition::C2, MeasureKind::l1, 25, 2, 3, 99);
    CHECK(a.worst_gap == b.worst_gap);
    CHECK(a.violations == b.violations);
    const CheckReport c = check_condition(Condition::C2, MeasureKind::l1, 25, 2, 3, 100);
    CHECK((c.worst_gap != a.worst_gap || c.violations != a.violations));
}

TEST_CASE("counterexample reproduction") {
    const CounterexampleReport report = reproduce_counterexample();
    CHECK(std::abs(report.ctr_phi1 - 1.5) < 1e-4);
    CHECK(std::abs(report.ctr_phi2 - 5.0 / 3.0) < 1e-4);
    CHECK(std::abs(report.additive_rhs - 19.0 / 12.0) < 1e-4);
    // True distances, verified analytically: the printed reference operator
    // sits at 5/4 from the mixed channel, and the constrained minimum is 3/2.
    CHECK(report.ctr_mix_upper == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(std::abs(report.ctr_mix_solved - 1.5) < 1e-3);
    CHECK(report.violated);
    CHECK(report.solver_converged);
}

TEST_CASE("counterexample conclusions are stable under tighter solver settings") {
    SolverOptions strict;
    strict.max_iterations = 60000;
    strict.tolerance = 1e-14;
    strict.step_scale = 0.05;
    strict.restarts = 3;
    strict.seed = 2;
    const CounterexampleReport tight = reproduce_counterexample(strict);
    const CounterexampleReport loose = reproduce_counterexample();
    CHECK(tight.violated == loose.violated);
    CHECK(std::abs(tight.ctr_phi1 - loose.ctr_phi1) < 1e-4);
    CHECK(std::abs(tight.ctr_phi2 - loose.ctr_phi2) < 1e-4);
    CHECK(std::abs(tight.ctr_mix_solved - loose.ctr_mix_solved) < 1e-3);
    CHECK(tight.ctr_mix_upper == loose.ctr_mix_upper); // no solver involved
}

TEST_CASE("condition names round trip") {
    for (Condition c : {Condition::C1, Condition::C2, Condition::C3, Condition::B3, Condition::B4})
        CHECK(parse_condition(condition_name(c)) == c);
    CHECK_FALSE(parse_condition("C9").has_value());
}
