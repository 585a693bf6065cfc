#include "harness.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace chancoh {

namespace {

constexpr double kCoherentFloor = 1e-4; // faithfulness floor for coherent samples
constexpr double kResampleL1 = 1e-6;

// Modified Gram-Schmidt with one re-orthogonalization pass; plenty for the
// tiny, well-conditioned Gaussian matrices drawn here.
void orthonormalize_columns(Matrix& g) {
    const std::size_t rows = g.rows();
    const std::size_t cols = g.cols();
    for (std::size_t c = 0; c < cols; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < c; ++prev) {
                Complex overlap = 0.0;
                for (std::size_t r = 0; r < rows; ++r) overlap += std::conj(g(r, prev)) * g(r, c);
                for (std::size_t r = 0; r < rows; ++r) g(r, c) -= overlap * g(r, prev);
            }
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < rows; ++r) norm += std::norm(g(r, c));
        norm = std::sqrt(norm);
        if (norm < 1e-12) raise(Errc::invalid_argument, "orthonormalize: rank-deficient draw");
        for (std::size_t r = 0; r < rows; ++r) g(r, c) /= norm;
    }
}

} // namespace

QuantumChannel random_channel(std::size_t dim_a, std::size_t dim_b, std::size_t kraus_count,
                              std::uint64_t seed) {
    if (kraus_count == 0) raise(Errc::invalid_argument, "random_channel: kraus_count must be >= 1");
    if (dim_a == 0 || dim_b == 0) raise(Errc::invalid_argument, "random_channel: zero dimension");
    if (kraus_count * dim_b < dim_a)
        raise(Errc::infeasible_isometry,
              "random_channel: kraus_count*dim_out < dim_in admits no isometry");

    Rng rng(seed);
    Matrix g(kraus_count * dim_b, dim_a);
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = rng.gaussian_complex();
    orthonormalize_columns(g);

    std::vector<Matrix> kraus;
    kraus.reserve(kraus_count);
    for (std::size_t n = 0; n < kraus_count; ++n) {
        Matrix k(dim_b, dim_a);
        for (std::size_t r = 0; r < dim_b; ++r)
            for (std::size_t c = 0; c < dim_a; ++c) k(r, c) = g(n * dim_b + r, c);
        kraus.push_back(std::move(k));
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

QuantumChannel random_coherent_channel(std::size_t dim_a, std::size_t dim_b, std::size_t kraus_count,
                                       std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        QuantumChannel ch = random_channel(dim_a, dim_b, kraus_count, Rng::derive(seed, attempt));
        if (l1_coherence(ch) >= kResampleL1) return ch;
        if (attempt > 64) raise(Errc::invalid_argument, "random_coherent_channel: resampling failed");
    }
}

QuantumChannel random_incoherent_channel(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed) {
    if (dim_a == 0 || dim_b == 0) raise(Errc::invalid_argument, "random_incoherent_channel: zero dimension");
    Rng rng(seed);
    std::vector<Matrix> kraus;
    for (std::size_t j = 0; j < dim_a; ++j) {
        const std::vector<double> diag = rng.simplex(dim_b, 1.0);
        for (std::size_t alpha = 0; alpha < dim_b; ++alpha) {
            if (diag[alpha] <= 0.0) continue;
            Matrix k(dim_b, dim_a);
            k(alpha, j) = std::sqrt(diag[alpha]);
            kraus.push_back(std::move(k));
        }
    }
    return QuantumChannel::from_kraus(std::move(kraus));
}

Superchannel random_isc(Dims dims, std::size_t kraus_count, std::uint64_t seed) {
    if (kraus_count == 0) raise(Errc::invalid_argument, "random_isc: kraus_count must be >= 1");
    Rng rng(seed);
    const std::size_t d = dims.total();

    const bool with_dephasing_layer = kraus_count >= 2 && kraus_count % 2 == 0 && dims.b >= 2;
    const std::size_t unitary_count = with_dephasing_layer ? kraus_count / 2 : kraus_count;

    const std::vector<double> weights = rng.simplex(unitary_count, 1.0);
    std::vector<Matrix> unitaries;
    for (std::size_t u = 0; u < unitary_count; ++u) {
        const std::vector<std::size_t> perm = rng.permutation(dims.b);
        Matrix m(d, d);
        const double amp = std::sqrt(weights[u]);
        for (std::size_t j = 0; j < dims.a; ++j) {
            const double theta = rng.uniform(0.0, 2.0 * M_PI);
            const Complex phase = Complex(std::cos(theta), std::sin(theta)) * amp;
            for (std::size_t alpha = 0; alpha < dims.b; ++alpha)
                m(j * dims.b + perm[alpha], j * dims.b + alpha) = phase;
        }
        unitaries.push_back(std::move(m));
    }

    if (!with_dephasing_layer)
        return Superchannel::from_kraus(dims, dims, std::move(unitaries));

    // Random two-part partition of the B labels; the projector layer runs
    // first, the unitary layer second.
    const std::size_t cut = 1 + static_cast<std::size_t>(rng.below(dims.b - 1));
    const std::vector<std::size_t> shuffled = rng.permutation(dims.b);
    std::vector<bool> in_first(dims.b, false);
    for (std::size_t i = 0; i < cut; ++i) in_first[shuffled[i]] = true;

    std::vector<Matrix> kraus;
    for (int part = 0; part < 2; ++part) {
        Matrix projector(d, d);
        for (std::size_t j = 0; j < dims.a; ++j)
            for (std::size_t alpha = 0; alpha < dims.b; ++alpha)
                if (in_first[alpha] == (part == 0)) {
                    const std::size_t idx = j * dims.b + alpha;
                    projector(idx, idx) = 1.0;
                }
        for (const Matrix& u : unitaries) kraus.push_back(u * projector);
    }
    return Superchannel::from_kraus(dims, dims, std::move(kraus));
}

const char* condition_name(Condition c) {
    switch (c) {
        case Condition::C1: return "C1";
        case Condition::C2: return "C2";
        case Condition::C3: return "C3";
        case Condition::B3: return "B3";
        case Condition::B4: return "B4";
    }
    return "?";
}

std::optional<Condition> parse_condition(const std::string& name) {
    if (name == "C1") return Condition::C1;
    if (name == "C2") return Condition::C2;
    if (name == "C3") return Condition::C3;
    if (name == "B3") return Condition::B3;
    if (name == "B4") return Condition::B4;
    return std::nullopt;
}

namespace {

bool is_trace_tier(MeasureKind measure) {
    return measure == MeasureKind::trace_distance || measure == MeasureKind::modified_trace;
}

struct GapTracker {
    std::size_t violations = 0;
    double worst = -std::numeric_limits<double>::infinity();

    void record(double gap, double threshold) {
        worst = std::max(worst, gap);
        if (gap > threshold) ++violations;
    }

    // Equality conditions: any deviation beyond the threshold violates; the
    // reported worst gap keeps its sign.
    void record_equality(double diff, double threshold) {
        if (!std::isfinite(worst) || std::abs(diff) > std::abs(worst)) worst = diff;
        if (std::abs(diff) > threshold) ++violations;
    }
};

std::size_t kraus_count_for_trial(std::size_t trial) { return 1 + trial % 3; }

// Smallest Kraus count admitting an isometry from dim_a into kraus*dim_b.
std::size_t feasible_kraus_count(std::size_t wanted, std::size_t dim_a, std::size_t dim_b) {
    const std::size_t minimum = (dim_a + dim_b - 1) / dim_b;
    return std::max(wanted, minimum);
}

} // namespace

CheckReport check_condition(Condition condition, MeasureKind measure, std::size_t trials,
                            std::size_t dim_a, std::size_t dim_b, std::uint64_t seed,
                            const SolverOptions& opts, std::optional<double> threshold) {
    if (trials == 0) raise(Errc::invalid_argument, "check_condition: trials must be >= 1");
    const double tol = threshold.value_or(is_trace_tier(measure) ? 1e-3 : 1e-7);
    GapTracker tracker;
    std::size_t instances = 0;

    switch (condition) {
        case Condition::C1: {
            // Incoherent channels must score ~0; coherent ones must clear the floor.
            for (std::size_t t = 0; t < trials; ++t) {
                const std::uint64_t s = Rng::derive(seed, 2 * t);
                const QuantumChannel incoherent = random_incoherent_channel(dim_a, dim_b, s);
                tracker.record(evaluate_measure(measure, incoherent, opts), tol);

                const std::uint64_t s2 = Rng::derive(seed, 2 * t + 1);
                const QuantumChannel coherent = random_coherent_channel(
                    dim_a, dim_b, feasible_kraus_count(kraus_count_for_trial(t), dim_a, dim_b), s2);
                const double value = evaluate_measure(measure, coherent, opts);
                tracker.record(kCoherentFloor - value, 0.0);
                instances += 2;
            }
            break;
        }
        case Condition::C2: {
            for (std::size_t t = 0; t < trials; ++t) {
                const QuantumChannel phi =
                    random_channel(dim_a, dim_b, feasible_kraus_count(kraus_count_for_trial(t), dim_a, dim_b),
                                   Rng::derive(seed, 2 * t));
                const Superchannel theta =
                    random_isc(Dims{dim_a, dim_b}, 1 + t % 4, Rng::derive(seed, 2 * t + 1));
                const SuperchannelOutput out = theta.apply_choi(phi.choi());
                const double gap = evaluate_measure(measure, out.choi, opts) - evaluate_measure(measure, phi, opts);
                tracker.record(gap, tol);
                ++instances;
            }
            break;
        }
        case Condition::C3: {
            const ExampleChannels example = example_channels();
            for (std::size_t t = 0; t < trials; ++t) {
                double weight = 0.5;
                QuantumChannel phi1 = example.phi1;
                QuantumChannel phi2 = example.phi2;
                if (t > 0) {
                    Rng rng(Rng::derive(seed, t));
                    const std::size_t b1 = 1 + static_cast<std::size_t>(rng.below(dim_b > 1 ? dim_b - 1 : 1));
                    const std::size_t b2 = std::max<std::size_t>(dim_b - b1, 1);
                    weight = rng.uniform(0.05, 0.95);
                    phi1 = random_channel(dim_a, b1, feasible_kraus_count(kraus_count_for_trial(t), dim_a, b1),
                                          rng.bits());
                    phi2 = random_channel(dim_a, b2,
                                          feasible_kraus_count(kraus_count_for_trial(t + 1), dim_a, b2),
                                          rng.bits());
                }
                const QuantumChannel combined = direct_sum({weight, 1.0 - weight}, {phi1, phi2});
                const double lhs = evaluate_measure(measure, combined, opts);
                const double rhs = weight * evaluate_measure(measure, phi1, opts) +
                                   (1.0 - weight) * evaluate_measure(measure, phi2, opts);
                tracker.record_equality(lhs - rhs, tol);
                ++instances;
            }
            break;
        }
        case Condition::B3: {
            for (std::size_t t = 0; t < trials; ++t) {
                const QuantumChannel phi =
                    random_channel(dim_a, dim_b, feasible_kraus_count(kraus_count_for_trial(t), dim_a, dim_b),
                                   Rng::derive(seed, 2 * t));
                const Superchannel theta =
                    random_isc(Dims{dim_a, dim_b}, 1 + t % 4, Rng::derive(seed, 2 * t + 1));
                const OutcomeEnsemble ensemble = theta.selective_apply(phi);
                double weighted = 0.0;
                for (const Outcome& outcome : ensemble.outcomes)
                    weighted += outcome.probability * evaluate_measure(measure, outcome.choi, opts);
                tracker.record(weighted - evaluate_measure(measure, phi, opts), tol);
                ++instances;
            }
            break;
        }
        case Condition::B4: {
            constexpr std::size_t kMixTerms = 3;
            for (std::size_t t = 0; t < trials; ++t) {
                Rng rng(Rng::derive(seed, t));
                const std::vector<double> weights = rng.simplex(kMixTerms, 1.0);
                std::vector<QuantumChannel> channels;
                double rhs = 0.0;
                for (std::size_t m = 0; m < kMixTerms; ++m) {
                    channels.push_back(random_channel(
                        dim_a, dim_b, feasible_kraus_count(kraus_count_for_trial(t + m), dim_a, dim_b),
                        rng.bits()));
                    rhs += weights[m] * evaluate_measure(measure, channels.back(), opts);
                }
                const QuantumChannel mixed = mixture_channel(weights, channels);
                tracker.record(evaluate_measure(measure, mixed, opts) - rhs, tol);
                ++instances;
            }
            break;
        }
    }

    CheckReport report;
    report.condition = condition;
    report.measure = measure;
    report.trials = instances;
    report.violations = tracker.violations;
    report.worst_gap = tracker.worst;
    report.seed = seed;
    return report;
}

CounterexampleReport reproduce_counterexample(const SolverOptions& opts) {
    const ExampleChannels ex = example_channels();

    CounterexampleReport report;
    const MeasureResult r1 = trace_distance_coherence(ex.phi1, opts);
    const MeasureResult r2 = trace_distance_coherence(ex.phi2, opts);
    report.ctr_phi1 = r1.value;
    report.ctr_phi2 = r2.value;
    report.additive_rhs = 0.5 * (r1.value + r2.value);

    const Matrix upper_arg = ex.phi_mix.choi().normalized() - example_phi0_subnormalized().normalized();
    report.ctr_mix_upper = trace_norm(upper_arg);

    const MeasureResult mix = trace_distance_coherence(ex.phi_mix, opts);
    report.ctr_mix_solved = mix.value;
    report.solver_converged = r1.converged && r2.converged && mix.converged;
    report.violated = (report.additive_rhs - report.ctr_mix_solved) > 1e-3;
    return report;
}

} // namespace chancoh
