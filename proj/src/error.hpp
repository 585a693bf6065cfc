#pragma once

#include <stdexcept>
#include <string>

namespace chancoh {

// Error codes shared with the C API (see include/chancoh.h).
enum class Errc {
    invalid_argument = 1,
    parse_error = 2,
    not_trace_preserving = 3,
    invalid_choi = 4,
    dimension_mismatch = 5,
    incomplete_kraus = 6,
    not_superchannel_output = 7,
    normalization_mismatch = 8,
    infeasible_isometry = 9,
    unsupported = 10,
    not_converged = 11,
    io_error = 12,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace chancoh
