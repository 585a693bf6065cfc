#include "chancoh.h"

#include "channel.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "json_io.hpp"
#include "measures.hpp"
#include "superchannel.hpp"

#include <cstring>
#include <new>
#include <string>

struct chancoh_channel {
    chancoh::QuantumChannel impl;
};

struct chancoh_superchannel {
    chancoh::Superchannel impl;
};

namespace {

thread_local std::string g_last_error;

chancoh_status status_from(chancoh::Errc code) {
    switch (code) {
        case chancoh::Errc::invalid_argument: return CHANCOH_ERR_INVALID_ARGUMENT;
        case chancoh::Errc::parse_error: return CHANCOH_ERR_PARSE;
        case chancoh::Errc::not_trace_preserving: return CHANCOH_ERR_NOT_TRACE_PRESERVING;
        case chancoh::Errc::invalid_choi: return CHANCOH_ERR_INVALID_CHOI;
        case chancoh::Errc::dimension_mismatch: return CHANCOH_ERR_DIMENSION_MISMATCH;
        case chancoh::Errc::incomplete_kraus: return CHANCOH_ERR_INCOMPLETE_KRAUS;
        case chancoh::Errc::not_superchannel_output: return CHANCOH_ERR_NOT_SUPERCHANNEL_OUTPUT;
        case chancoh::Errc::normalization_mismatch: return CHANCOH_ERR_NORMALIZATION;
        case chancoh::Errc::infeasible_isometry: return CHANCOH_ERR_INFEASIBLE_ISOMETRY;
        case chancoh::Errc::unsupported: return CHANCOH_ERR_UNSUPPORTED;
        case chancoh::Errc::not_converged: return CHANCOH_ERR_NOT_CONVERGED;
        case chancoh::Errc::io_error: return CHANCOH_ERR_IO;
    }
    return CHANCOH_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
chancoh_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CHANCOH_OK;
    } catch (const chancoh::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CHANCOH_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CHANCOH_ERR_INVALID_ARGUMENT;
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

chancoh::SolverOptions convert(const chancoh_solver_options* opts) {
    chancoh::SolverOptions out;
    if (!opts) return out;
    if (opts->max_iterations > 0) out.max_iterations = static_cast<std::size_t>(opts->max_iterations);
    if (opts->step_scale > 0.0) out.step_scale = opts->step_scale;
    if (opts->tolerance > 0.0) out.tolerance = opts->tolerance;
    if (opts->restarts > 0) out.restarts = static_cast<std::size_t>(opts->restarts);
    out.seed = opts->seed;
    return out;
}

void fill_validation(const chancoh::ValidationReport& report, chancoh_validation* out) {
    out->hermitian = report.hermitian ? 1 : 0;
    out->psd = report.psd ? 1 : 0;
    out->trace_preserving = report.trace_preserving ? 1 : 0;
    out->incoherent = report.incoherent ? 1 : 0;
    out->max_hermiticity_error = report.max_hermiticity_error;
    out->min_eigenvalue = report.min_eigenvalue;
    out->max_partial_trace_error = report.max_partial_trace_error;
    out->max_offdiagonal = report.max_offdiagonal;
}

// Either variant is reduced to a Choi matrix for validation; a Kraus family
// is validated through its (always well-formed) Choi image plus the
// trace-preservation residual of the family itself.
chancoh::ValidationReport validate_parsed(const chancoh::Json& json) {
    chancoh::ParsedChannelFile parsed = chancoh::parse_channel_json(json);
    if (parsed.choi) {
        chancoh::ChoiMatrix choi(parsed.dim_in, parsed.dim_out, std::move(*parsed.choi));
        return choi.validate();
    }
    const std::size_t d = parsed.dim_in * parsed.dim_out;
    chancoh::Matrix j(d, d);
    for (const chancoh::Matrix& k : *parsed.kraus) {
        for (std::size_t col = 0; col < parsed.dim_in; ++col)
            for (std::size_t alpha = 0; alpha < parsed.dim_out; ++alpha)
                for (std::size_t col2 = 0; col2 < parsed.dim_in; ++col2)
                    for (std::size_t beta = 0; beta < parsed.dim_out; ++beta)
                        j(col * parsed.dim_out + alpha, col2 * parsed.dim_out + beta) +=
                            k(alpha, col) * std::conj(k(beta, col2));
    }
    return chancoh::ChoiMatrix(parsed.dim_in, parsed.dim_out, std::move(j)).validate();
}

} // namespace

extern "C" {

const char* chancoh_status_message(chancoh_status status) {
    switch (status) {
        case CHANCOH_OK: return "ok";
        case CHANCOH_ERR_INVALID_ARGUMENT: return "invalid argument";
        case CHANCOH_ERR_PARSE: return "parse error";
        case CHANCOH_ERR_NOT_TRACE_PRESERVING: return "Kraus family is not trace preserving";
        case CHANCOH_ERR_INVALID_CHOI: return "matrix violates the Choi invariants";
        case CHANCOH_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case CHANCOH_ERR_INCOMPLETE_KRAUS: return "Kraus family is not complete";
        case CHANCOH_ERR_NOT_SUPERCHANNEL_OUTPUT: return "superchannel output invalid on this input";
        case CHANCOH_ERR_NORMALIZATION: return "outcome probabilities do not normalize";
        case CHANCOH_ERR_INFEASIBLE_ISOMETRY: return "dimensions admit no isometry";
        case CHANCOH_ERR_UNSUPPORTED: return "unsupported request";
        case CHANCOH_ERR_NOT_CONVERGED: return "solver did not converge";
        case CHANCOH_ERR_IO: return "I/O failure";
    }
    return "unknown status";
}

const char* chancoh_last_error(void) { return g_last_error.c_str(); }

void chancoh_string_free(char* text) { delete[] text; }

void chancoh_solver_options_defaults(chancoh_solver_options* opts) {
    if (!opts) return;
    const chancoh::SolverOptions defaults;
    opts->max_iterations = static_cast<int32_t>(defaults.max_iterations);
    opts->step_scale = defaults.step_scale;
    opts->tolerance = defaults.tolerance;
    opts->restarts = static_cast<int32_t>(defaults.restarts);
    opts->seed = defaults.seed;
}

chancoh_status chancoh_channel_from_json(const char* json_text, chancoh_channel** out) {
    if (!json_text || !out) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        chancoh::Json j;
        try {
            j = chancoh::Json::parse(json_text);
        } catch (const std::exception& e) {
            chancoh::raise(chancoh::Errc::parse_error, std::string("JSON parse failure: ") + e.what());
        }
        *out = new chancoh_channel{chancoh::channel_from_json(j)};
    });
}

chancoh_status chancoh_channel_load(const char* path, chancoh_channel** out) {
    if (!path || !out) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new chancoh_channel{chancoh::channel_from_json(chancoh::load_json_file(path))};
    });
}

chancoh_status chancoh_channel_save(const chancoh_channel* channel, const char* path) {
    if (!channel || !path) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] { chancoh::save_json_file(path, chancoh::channel_to_json(channel->impl)); });
}

chancoh_status chancoh_channel_to_json(const chancoh_channel* channel, char** out_json) {
    if (!channel || !out_json) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out_json = copy_string(chancoh::channel_to_json(channel->impl).dump()); });
}

void chancoh_channel_free(chancoh_channel* channel) { delete channel; }

int32_t chancoh_channel_dim_in(const chancoh_channel* channel) {
    return channel ? static_cast<int32_t>(channel->impl.dim_in()) : 0;
}

int32_t chancoh_channel_dim_out(const chancoh_channel* channel) {
    return channel ? static_cast<int32_t>(channel->impl.dim_out()) : 0;
}

chancoh_status chancoh_channel_dephasing(int32_t dim, chancoh_channel** out) {
    if (!out || dim <= 0) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new chancoh_channel{chancoh::dephasing_channel(static_cast<std::size_t>(dim))};
    });
}

chancoh_status chancoh_channel_max_coherent(int32_t dim_in, int32_t dim_out, const double* phases,
                                            chancoh_channel** out) {
    if (!out || dim_in <= 0 || dim_out <= 0) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        chancoh::MaxCoherentSpec spec;
        spec.dim_in = static_cast<std::size_t>(dim_in);
        spec.dim_out = static_cast<std::size_t>(dim_out);
        if (phases)
            spec.phases.assign(phases, phases + spec.dim_in * spec.dim_out);
        else
            spec.phases = chancoh::fourier_phases(spec.dim_in, spec.dim_out);
        *out = new chancoh_channel{chancoh::max_coherent_channel(spec)};
    });
}

chancoh_status chancoh_channel_random(int32_t dim_in, int32_t dim_out, int32_t kraus_count,
                                      uint64_t seed, chancoh_channel** out) {
    if (!out || dim_in <= 0 || dim_out <= 0 || kraus_count <= 0) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new chancoh_channel{chancoh::random_channel(static_cast<std::size_t>(dim_in),
                                                           static_cast<std::size_t>(dim_out),
                                                           static_cast<std::size_t>(kraus_count), seed)};
    });
}

chancoh_status chancoh_channel_random_incoherent(int32_t dim_in, int32_t dim_out, uint64_t seed,
                                                 chancoh_channel** out) {
    if (!out || dim_in <= 0 || dim_out <= 0) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new chancoh_channel{chancoh::random_incoherent_channel(
            static_cast<std::size_t>(dim_in), static_cast<std::size_t>(dim_out), seed)};
    });
}

chancoh_status chancoh_validate_file(const char* path, chancoh_validation* report) {
    if (!path || !report) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] { fill_validation(validate_parsed(chancoh::load_json_file(path)), report); });
}

chancoh_status chancoh_validate_json(const char* json_text, chancoh_validation* report) {
    if (!json_text || !report) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        chancoh::Json j;
        try {
            j = chancoh::Json::parse(json_text);
        } catch (const std::exception& e) {
            chancoh::raise(chancoh::Errc::parse_error, std::string("JSON parse failure: ") + e.what());
        }
        fill_validation(validate_parsed(j), report);
    });
}

chancoh_status chancoh_measure(const chancoh_channel* channel, const char* measure,
                               const chancoh_solver_options* opts, chancoh_measure_result* result,
                               double* witness_diagonal) {
    if (!channel || !measure || !result) return CHANCOH_ERR_INVALID_ARGUMENT;
    bool converged = true;
    const chancoh_status status = guarded([&] {
        const auto kind = chancoh::parse_measure(measure);
        if (!kind) chancoh::raise(chancoh::Errc::invalid_argument, std::string("unknown measure: ") + measure);
        const chancoh::SolverOptions solver_opts = convert(opts);

        result->lambda = 1.0;
        result->iterations = 0;
        result->converged = 1;
        switch (*kind) {
            case chancoh::MeasureKind::l1:
            case chancoh::MeasureKind::relative_entropy: {
                if (witness_diagonal)
                    chancoh::raise(chancoh::Errc::unsupported, "witness is defined for ctr/ctr-mod only");
                result->value = chancoh::evaluate_measure(*kind, channel->impl, solver_opts);
                break;
            }
            case chancoh::MeasureKind::trace_distance:
            case chancoh::MeasureKind::modified_trace: {
                const chancoh::MeasureResult r =
                    (*kind == chancoh::MeasureKind::trace_distance)
                        ? chancoh::trace_distance_coherence(channel->impl, solver_opts)
                        : chancoh::modified_trace_coherence(channel->impl, solver_opts);
                result->value = r.value;
                result->lambda = r.lambda;
                result->iterations = static_cast<int64_t>(r.iterations);
                result->converged = r.converged ? 1 : 0;
                converged = r.converged;
                if (witness_diagonal && r.witness) {
                    const chancoh::Matrix& w = *r.witness;
                    for (std::size_t i = 0; i < w.rows(); ++i) witness_diagonal[i] = w(i, i).real();
                }
                break;
            }
        }
    });
    if (status != CHANCOH_OK) return status;
    if (!converged) {
        g_last_error = "solver hit the iteration cap; best value returned";
        return CHANCOH_ERR_NOT_CONVERGED;
    }
    return CHANCOH_OK;
}

chancoh_status chancoh_superchannel_from_json(const char* json_text, chancoh_superchannel** out) {
    if (!json_text || !out) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        chancoh::Json j;
        try {
            j = chancoh::Json::parse(json_text);
        } catch (const std::exception& e) {
            chancoh::raise(chancoh::Errc::parse_error, std::string("JSON parse failure: ") + e.what());
        }
        *out = new chancoh_superchannel{chancoh::superchannel_from_json(j)};
    });
}

chancoh_status chancoh_superchannel_load(const char* path, chancoh_superchannel** out) {
    if (!path || !out) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new chancoh_superchannel{chancoh::superchannel_from_json(chancoh::load_json_file(path))};
    });
}

void chancoh_superchannel_free(chancoh_superchannel* superchannel) { delete superchannel; }

int32_t chancoh_superchannel_is_incoherent(const chancoh_superchannel* superchannel) {
    if (!superchannel) return 0;
    return superchannel->impl.is_incoherent() ? 1 : 0;
}

chancoh_status chancoh_apply(const chancoh_superchannel* superchannel, const chancoh_channel* channel,
                             chancoh_channel** out) {
    if (!superchannel || !channel || !out) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] { *out = new chancoh_channel{superchannel->impl.apply(channel->impl)}; });
}

chancoh_status chancoh_selective_apply_json(const chancoh_superchannel* superchannel,
                                            const chancoh_channel* channel, char** out_json) {
    if (!superchannel || !channel || !out_json) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const chancoh::OutcomeEnsemble ensemble = superchannel->impl.selective_apply(channel->impl);
        chancoh::Json arr = chancoh::Json::array();
        for (const chancoh::Outcome& outcome : ensemble.outcomes) {
            chancoh::Json entry;
            entry["probability"] = outcome.probability;
            entry["channel"] = chancoh::choi_to_json(outcome.choi);
            entry["choi_valid"] = outcome.choi_valid;
            arr.push_back(std::move(entry));
        }
        *out_json = copy_string(arr.dump());
    });
}

chancoh_status chancoh_run_condition(const char* condition, const char* measure, int32_t trials,
                                     int32_t dim_in, int32_t dim_out, uint64_t seed,
                                     const chancoh_solver_options* opts, char** report_json) {
    if (!condition || !measure || !report_json || trials <= 0 || dim_in <= 0 || dim_out <= 0)
        return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const auto cond = chancoh::parse_condition(condition);
        if (!cond)
            chancoh::raise(chancoh::Errc::invalid_argument, std::string("unknown condition: ") + condition);
        const auto kind = chancoh::parse_measure(measure);
        if (!kind) chancoh::raise(chancoh::Errc::invalid_argument, std::string("unknown measure: ") + measure);
        const chancoh::CheckReport report = chancoh::check_condition(
            *cond, *kind, static_cast<std::size_t>(trials), static_cast<std::size_t>(dim_in),
            static_cast<std::size_t>(dim_out), seed, convert(opts));
        *report_json = copy_string(chancoh::report_to_json(report).dump());
    });
}

chancoh_status chancoh_counterexample(const chancoh_solver_options* opts, char** report_json) {
    if (!report_json) return CHANCOH_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const chancoh::CounterexampleReport report = chancoh::reproduce_counterexample(convert(opts));
        *report_json = copy_string(chancoh::report_to_json(report).dump());
    });
}

} // extern "C"
