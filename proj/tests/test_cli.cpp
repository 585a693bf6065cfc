// End-to-end checks of the installed command-line tool, driven through the
// shell. CHANCOH_CLI_PATH is injected by CMake.

#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

using nlohmann::json;

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run(const std::string& args) {
    const std::string command = std::string(CHANCOH_CLI_PATH) + " " + args + " 2>/dev/null";
    CommandResult result;
    std::FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace

TEST_CASE("cli: random channels validate for many seeds") {
    for (int seed = 0; seed < 100; ++seed) {
        const std::string file = "/tmp/chancoh_cli_rt_" + std::to_string(seed) + ".json";
        const CommandResult gen = run("random --dims 2x3 --kraus 2 --seed " + std::to_string(seed) +
                                      " --out " + file);
        REQUIRE(gen.exit_code == 0);
        const CommandResult check = run("validate --file " + file);
        CHECK(check.exit_code == 0);
        std::remove(file.c_str());
    }
}

TEST_CASE("cli: measure prints ten significant digits and supports JSON") {
    const std::string file = "/tmp/chancoh_cli_deph.json";
    // A dephasing channel written through random --incoherent would do, but the
    // exact dephasing channel comes from a fixed literal here.
    const json deph = {
        {"dim_in", 2},
        {"dim_out", 2},
        {"kraus",
         json::array({json::array({json::array({json::array({1.0, 0.0}), json::array({0.0, 0.0})}),
                                   json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0})})}),
                      json::array({json::array({json::array({0.0, 0.0}), json::array({0.0, 0.0})}),
                                   json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0})})})})}};
    std::FILE* f = std::fopen(file.c_str(), "w");
    REQUIRE(f != nullptr);
    const std::string text = deph.dump();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);

    const CommandResult l1 = run("measure --file " + file + " --measure l1");
    CHECK(l1.exit_code == 0);
    CHECK(std::stod(l1.output) == 0.0);
    CHECK(l1.output.substr(0, 11) == "0.000000000");

    const CommandResult ctr = run("measure --file " + file + " --measure ctr --json");
    CHECK(ctr.exit_code == 0);
    const json parsed = json::parse(ctr.output);
    CHECK(parsed["value"].get<double>() < 1e-10);
    CHECK(parsed["converged"].get<bool>());
    std::remove(file.c_str());
}

TEST_CASE("cli: exit codes") {
    const std::string bad = "/tmp/chancoh_cli_bad.json";
    std::FILE* f = std::fopen(bad.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("{broken", f);
    std::fclose(f);
    CHECK(run("measure --file " + bad + " --measure l1").exit_code == 2);
    std::remove(bad.c_str());

    CHECK(run("measure --file /nonexistent.json --measure l1").exit_code == 2);
    CHECK(run("measure --file /nonexistent.json --measure nope").exit_code == 2);
    CHECK(run("bogus-subcommand").exit_code == 2);
}

TEST_CASE("cli: suite reports the expected additivity violation for ctr") {
    const CommandResult clean = run("suite --condition C3 --measure l1 --trials 20 --dims 2x3 --seed 4");
    REQUIRE(clean.exit_code == 0);
    const json clean_report = json::parse(clean.output);
    CHECK(clean_report["violations"].get<int>() == 0);

    const CommandResult breach = run("suite --condition C3 --measure ctr --trials 1 --dims 2x5 --seed 4");
    CHECK(breach.exit_code == 0);
    const json breach_report = json::parse(breach.output);
    CHECK(breach_report["violations"].get<int>() >= 1);
    CHECK(breach_report["expected_violation"].get<bool>());
}

TEST_CASE("cli: counterexample JSON") {
    const CommandResult result = run("counterexample");
    CHECK(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report["violated"].get<bool>());
    CHECK(std::abs(report["ctr_phi1"].get<double>() - 1.5) < 1e-4);
    CHECK(std::abs(report["additive_rhs"].get<double>() - 19.0 / 12.0) < 1e-4);
}

TEST_CASE("cli: apply a superchannel file deterministically and selectively") {
    // Q-pair on the 2x5 space: diagonal 0/1 projectors onto the B1/B2 rows.
    json kraus = json::array();
    for (int part = 0; part < 2; ++part) {
        json rows = json::array();
        for (int r = 0; r < 10; ++r) {
            json row = json::array();
            for (int c = 0; c < 10; ++c) {
                const bool in_b1 = (r % 5) < 2;
                const double value = (r == c && in_b1 == (part == 0)) ? 1.0 : 0.0;
                row.push_back(json::array({value, 0.0}));
            }
            rows.push_back(row);
        }
        kraus.push_back(rows);
    }
    const json q_pair = {{"dims_in", {2, 5}}, {"dims_out", {2, 5}}, {"kraus", kraus},
                         {"subnormalized", false}};
    const std::string sc_file = "/tmp/chancoh_cli_qpair.json";
    {
        std::FILE* f = std::fopen(sc_file.c_str(), "w");
        REQUIRE(f != nullptr);
        const std::string text = q_pair.dump();
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }

    const std::string ch_file = "/tmp/chancoh_cli_mix.json";
    REQUIRE(run("random --dims 2x5 --kraus 2 --seed 3 --out " + ch_file).exit_code == 0);

    const std::string out_file = "/tmp/chancoh_cli_applied.json";
    const CommandResult applied =
        run("apply --file " + ch_file + " --superchannel " + sc_file + " --out " + out_file);
    CHECK(applied.exit_code == 0);
    CHECK(run("validate --file " + out_file).exit_code == 0);

    const CommandResult selective =
        run("apply --file " + ch_file + " --superchannel " + sc_file + " --selective");
    CHECK(selective.exit_code == 0);
    const json ensemble = json::parse(selective.output);
    double total = 0.0;
    for (const auto& outcome : ensemble) total += outcome["probability"].get<double>();
    CHECK(std::abs(total - 1.0) < 1e-9);

    std::remove(sc_file.c_str());
    std::remove(ch_file.c_str());
    std::remove(out_file.c_str());
}

TEST_CASE("cli: the ctr witness file is a valid incoherent channel") {
    const std::string ch_file = "/tmp/chancoh_cli_wit_src.json";
    const std::string wit_file = "/tmp/chancoh_cli_wit.json";
    REQUIRE(run("random --dims 2x2 --kraus 2 --seed 9 --out " + ch_file).exit_code == 0);
    REQUIRE(run("measure --file " + ch_file + " --measure ctr --witness " + wit_file).exit_code == 0);

    const CommandResult check = run("validate --file " + wit_file + " --json");
    CHECK(check.exit_code == 0);
    const json report = json::parse(check.output);
    CHECK(report["valid"].get<bool>());
    CHECK(report["incoherent"].get<bool>());
    std::remove(ch_file.c_str());
    std::remove(wit_file.c_str());
}

TEST_CASE("cli: validate names the failing invariant") {
    // Sub-normalized diagonal Choi: hermitian and PSD but not trace preserving.
    const std::string file = "/tmp/chancoh_cli_subnorm.json";
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
        json row = json::array();
        for (int c = 0; c < 4; ++c)
            row.push_back(json::array({(r == c && r < 2) ? 0.25 : 0.0, 0.0}));
        rows.push_back(row);
    }
    const json choi = {{"dim_in", 2}, {"dim_out", 2}, {"choi", rows}};
    std::FILE* f = std::fopen(file.c_str(), "w");
    REQUIRE(f != nullptr);
    const std::string text = choi.dump();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);

    const CommandResult result = run("validate --file " + file + " --json");
    CHECK(result.exit_code == 1);
    const json report = json::parse(result.output);
    CHECK_FALSE(report["partial_trace"].get<bool>());
    CHECK(report["psd"].get<bool>());
    CHECK(report["incoherent"].get<bool>());
    std::remove(file.c_str());
}
