#pragma once

#include "channel.hpp"
#include "harness.hpp"
#include "superchannel.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace chancoh {

using Json = nlohmann::json;

// Matrices travel as rows of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Channel file, parsed but not yet validated. Exactly one of kraus/choi is
/// present: { "dim_in": int, "dim_out": int, "kraus": [...] | "choi": [...] }.
struct ParsedChannelFile {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::optional<std::vector<Matrix>> kraus;
    std::optional<Matrix> choi;
};

ParsedChannelFile parse_channel_json(const Json& j);
QuantumChannel channel_from_json(const Json& j); // validates either variant
Json channel_to_json(const QuantumChannel& phi);
Json choi_to_json(const ChoiMatrix& j);

/// { "dims_in": [a,b], "dims_out": [a2,b2], "kraus": [...], "subnormalized": bool }
Superchannel superchannel_from_json(const Json& j);
Json superchannel_to_json(const Superchannel& theta);

Json report_to_json(const CheckReport& report);
Json report_to_json(const CounterexampleReport& report);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

} // namespace chancoh
