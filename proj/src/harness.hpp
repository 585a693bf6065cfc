#pragma once

#include "channel.hpp"
#include "measures.hpp"
#include "superchannel.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace chancoh {

/// Haar-style random channel: Gaussian (kraus_count*|B|) x |A| block matrix
/// orthonormalized into an isometry and split into Kraus blocks.
QuantumChannel random_channel(std::size_t dim_a, std::size_t dim_b, std::size_t kraus_count,
                              std::uint64_t seed);

/// Random channel resampled until C_l1 >= 1e-6, so the strict faithfulness
/// direction is testable.
QuantumChannel random_coherent_channel(std::size_t dim_a, std::size_t dim_b, std::size_t kraus_count,
                                       std::uint64_t seed);

/// Diagonal-Choi channel with per-block diagonals drawn from the uniform
/// simplex; always passes is_incoherent.
QuantumChannel random_incoherent_channel(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed);

/// Random incoherent superchannel on dims -> dims: a probability-weighted
/// mixture of (A-diagonal-phase (x) B-permutation) Kraus operators, refined by
/// a two-part B dephasing layer for even kraus counts >= 2. Every member is a
/// complete column-sparse family that maps channels to channels.
Superchannel random_isc(Dims dims, std::size_t kraus_count, std::uint64_t seed);

enum class Condition { C1, C2, C3, B3, B4 };

const char* condition_name(Condition c);
std::optional<Condition> parse_condition(const std::string& name);

struct CheckReport {
    Condition condition = Condition::C1;
    MeasureKind measure = MeasureKind::l1;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_gap = 0.0; // signed; positive means "in the forbidden direction"
    std::uint64_t seed = 0;
};

/// Runs the named framework condition on `trials` random instances over
/// channels of the given dimensions. Violation thresholds default to 1e-7 for
/// the closed-form measures and 1e-3 for the iterative trace measures; pass
/// `threshold` to override. For C3 the first trial is always the worked
/// counterexample instance.
CheckReport check_condition(Condition condition, MeasureKind measure, std::size_t trials,
                            std::size_t dim_a, std::size_t dim_b, std::uint64_t seed,
                            const SolverOptions& opts = {}, std::optional<double> threshold = {});

struct CounterexampleReport {
    double ctr_phi1 = 0.0;
    double ctr_phi2 = 0.0;
    double additive_rhs = 0.0;  // (ctr_phi1 + ctr_phi2) / 2
    double ctr_mix_upper = 0.0; // ||J_mix/2 - J_phi0/2||_tr with the sub-normalized phi0
    double ctr_mix_solved = 0.0;
    bool violated = false;      // additive_rhs - ctr_mix_solved > 1e-3
    bool solver_converged = true;
};

/// Builds the worked-example channels and evaluates the additivity
/// counterexample quantities.
CounterexampleReport reproduce_counterexample(const SolverOptions& opts = {});

} // namespace chancoh
