#include "json_io.hpp"

#include "error.hpp"

#include <fstream>

namespace chancoh {

namespace {

std::size_t require_dim(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0)
        raise(Errc::parse_error, std::string("channel JSON: missing or non-positive \"") + key + "\"");
    return j[key].get<std::size_t>();
}

} // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Complex& z = m(r, c);
            row.push_back(Json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) raise(Errc::parse_error, "matrix JSON: expected non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) raise(Errc::parse_error, "matrix JSON: expected array rows");
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) raise(Errc::parse_error, "matrix JSON: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& entry = j[r][c];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
                raise(Errc::parse_error, "matrix JSON: entries must be [re, im] pairs");
            m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

ParsedChannelFile parse_channel_json(const Json& j) {
    if (!j.is_object()) raise(Errc::parse_error, "channel JSON: expected an object");
    ParsedChannelFile file;
    file.dim_in = require_dim(j, "dim_in");
    file.dim_out = require_dim(j, "dim_out");

    const bool has_kraus = j.contains("kraus");
    const bool has_choi = j.contains("choi");
    if (has_kraus == has_choi)
        raise(Errc::parse_error, "channel JSON: exactly one of \"kraus\"/\"choi\" must be present");

    if (has_kraus) {
        if (!j["kraus"].is_array() || j["kraus"].empty())
            raise(Errc::parse_error, "channel JSON: \"kraus\" must be a non-empty array");
        std::vector<Matrix> kraus;
        for (const Json& op : j["kraus"]) {
            Matrix k = matrix_from_json(op);
            if (k.rows() != file.dim_out || k.cols() != file.dim_in)
                raise(Errc::parse_error, "channel JSON: Kraus operator shape does not match dims");
            kraus.push_back(std::move(k));
        }
        file.kraus = std::move(kraus);
    } else {
        Matrix choi = matrix_from_json(j["choi"]);
        const std::size_t d = file.dim_in * file.dim_out;
        if (choi.rows() != d || choi.cols() != d)
            raise(Errc::parse_error, "channel JSON: Choi matrix shape does not match dims");
        file.choi = std::move(choi);
    }
    return file;
}

QuantumChannel channel_from_json(const Json& j) {
    ParsedChannelFile file = parse_channel_json(j);
    if (file.kraus) return QuantumChannel::from_kraus(std::move(*file.kraus));
    return QuantumChannel::from_choi(ChoiMatrix(file.dim_in, file.dim_out, std::move(*file.choi)));
}

Json channel_to_json(const QuantumChannel& phi) {
    Json j;
    j["dim_in"] = phi.dim_in();
    j["dim_out"] = phi.dim_out();
    Json kraus = Json::array();
    for (const Matrix& k : phi.kraus()) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
    return j;
}

Json choi_to_json(const ChoiMatrix& choi) {
    Json j;
    j["dim_in"] = choi.dim_in();
    j["dim_out"] = choi.dim_out();
    j["choi"] = matrix_to_json(choi.matrix());
    return j;
}

Superchannel superchannel_from_json(const Json& j) {
    if (!j.is_object()) raise(Errc::parse_error, "superchannel JSON: expected an object");
    auto read_dims = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
            raise(Errc::parse_error, std::string("superchannel JSON: \"") + key + "\" must be [a, b]");
        const long long a = j[key][0].get<long long>();
        const long long b = j[key][1].get<long long>();
        if (a <= 0 || b <= 0) raise(Errc::parse_error, "superchannel JSON: dimensions must be positive");
        return Dims{static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    };
    const Dims dims_in = read_dims("dims_in");
    const Dims dims_out = read_dims("dims_out");
    const bool subnormalized = j.value("subnormalized", false);

    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
        raise(Errc::parse_error, "superchannel JSON: \"kraus\" must be a non-empty array");
    std::vector<Matrix> kraus;
    for (const Json& op : j["kraus"]) kraus.push_back(matrix_from_json(op));
    return Superchannel::from_kraus(dims_in, dims_out, std::move(kraus), subnormalized);
}

Json superchannel_to_json(const Superchannel& theta) {
    Json j;
    j["dims_in"] = Json::array({theta.dims_in().a, theta.dims_in().b});
    j["dims_out"] = Json::array({theta.dims_out().a, theta.dims_out().b});
    j["subnormalized"] = theta.subnormalized();
    Json kraus = Json::array();
    for (const Matrix& k : theta.kraus()) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
    return j;
}

Json report_to_json(const CheckReport& report) {
    Json j;
    j["condition"] = condition_name(report.condition);
    j["measure"] = measure_name(report.measure);
    j["trials"] = report.trials;
    j["violations"] = report.violations;
    j["worst_gap"] = report.worst_gap;
    j["seed"] = report.seed;
    return j;
}

Json report_to_json(const CounterexampleReport& report) {
    Json j;
    j["ctr_phi1"] = report.ctr_phi1;
    j["ctr_phi2"] = report.ctr_phi2;
    j["additive_rhs"] = report.additive_rhs;
    j["ctr_mix_upper"] = report.ctr_mix_upper;
    j["ctr_mix_solved"] = report.ctr_mix_solved;
    j["violated"] = report.violated;
    j["solver_converged"] = report.solver_converged;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(Errc::parse_error, std::string("JSON parse failure: ") + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) raise(Errc::io_error, "cannot open file for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) raise(Errc::io_error, "write failure: " + path);
}

} // namespace chancoh
