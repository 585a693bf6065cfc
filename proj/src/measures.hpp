#pragma once

#include "channel.hpp"
#include "matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chancoh {

enum class MeasureKind { l1, relative_entropy, trace_distance, modified_trace };

/// CLI names: l1, rel, ctr, ctr-mod.
const char* measure_name(MeasureKind kind);
std::optional<MeasureKind> parse_measure(const std::string& name);

struct SolverOptions {
    std::size_t max_iterations = 20000;
    double step_scale = 0.1;   // diminishing step step_scale/sqrt(k)
    double tolerance = 1e-10;  // stall threshold on best-value improvement
    std::size_t restarts = 1;  // start 0 is the projected-diagonal warm start
    std::uint64_t seed = 0;    // seeds the random restarts
};

struct MeasureResult {
    double value = 0.0;
    std::optional<Matrix> witness; // |A| * D, the closest incoherent Choi diagonal
    double lambda = 1.0;           // scale of the modified measure; 1 otherwise
    std::size_t iterations = 0;
    bool converged = true;
    std::vector<double> start_values; // per-start best values (diagnostics)
};

/// Sum of |entries| of J/|A| off the diagonal.
double l1_coherence(const ChoiMatrix& j);
double l1_coherence(const QuantumChannel& phi);

/// S(dephase(J/|A|)) - S(J/|A|) in bits.
double relative_entropy_coherence(const ChoiMatrix& j);
double relative_entropy_coherence(const QuantumChannel& phi);

/// min over diagonal D >= 0 with per-j-block sums 1/|A| of ||J/|A| - D||_tr,
/// by projected subgradient with per-block simplex projection.
MeasureResult trace_distance_coherence(const ChoiMatrix& j, const SolverOptions& opts = {});
MeasureResult trace_distance_coherence(const QuantumChannel& phi, const SolverOptions& opts = {});

/// Exhaustive grid over the feasible diagonal polytope, grid_points per free
/// dimension. Requires at most 4 free parameters (|A|(|B|-1) <= 4).
double trace_distance_coherence_oracle(const ChoiMatrix& j, std::size_t grid_points);
double trace_distance_coherence_oracle(const QuantumChannel& phi, std::size_t grid_points);

/// min over lambda >= 0 and feasible D of ||J/|A| - lambda D||_tr; inner
/// projected subgradient, outer golden-section search on [0, 2].
MeasureResult modified_trace_coherence(const ChoiMatrix& j, const SolverOptions& opts = {});
MeasureResult modified_trace_coherence(const QuantumChannel& phi, const SolverOptions& opts = {});

/// Grid oracle for the modified measure (D grid x lambda grid on [0, 2]).
double modified_trace_coherence_oracle(const ChoiMatrix& j, std::size_t grid_points,
                                       std::size_t lambda_grid_points);

/// 2(|A||B| - 1)/(|A||B|): the closed-form value for the maximally coherent
/// channel.
double ctr_max_closed_form(std::size_t dim_a, std::size_t dim_b);

/// Dispatch by measure kind; returns the value only.
double evaluate_measure(MeasureKind kind, const ChoiMatrix& j, const SolverOptions& opts = {});
double evaluate_measure(MeasureKind kind, const QuantumChannel& phi, const SolverOptions& opts = {});

/// Euclidean projection onto {x >= 0, sum x = total}.
std::vector<double> project_to_simplex(std::vector<double> v, double total);

} // namespace chancoh
