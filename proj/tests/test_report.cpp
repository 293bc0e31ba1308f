#include "driftlap/report.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <doctest.h>

#include "driftlap/cli.hpp"

using namespace driftlap;
using nlohmann::json;

namespace {

// Run the CLI in-process with stdout/stderr captured, so tests can assert on
// the text without polluting the test log.
struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"driftlap"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult res;
    res.code = cli_run(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    res.out = out.str();
    res.err = err.str();
    return res;
}

std::string temp_path(const char* name) {
    return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

ResidualReport small_report() {
    SweepConfig cfg;
    cfg.grid = {{3.0, 0.4}, {4.0, 0.0}};
    cfg.points = 30;
    return run_sweep(cfg);
}

} // namespace

TEST_CASE("report JSON carries the schema, manifest, and per-record fields") {
    ResidualReport rep = small_report();
    RunManifest man = make_manifest("verify", config_to_json(rep.config), rep.config.seed);
    json j = report_to_json(rep, man);

    CHECK(j.at("schema_version").get<int>() == kSchemaVersion);
    CHECK(j.at("pass").get<bool>());
    const json& m = j.at("manifest");
    CHECK(m.at("subcommand") == "verify");
    CHECK(m.at("version") == kToolVersion);
    CHECK(m.at("seed").get<std::uint64_t>() == 42);
    CHECK(m.at("config_hash").get<std::string>().size() == 16);
    CHECK(m.at("timestamp").get<std::string>().size() == 20); // YYYY-MM-DDThh:mm:ssZ
    CHECK(m.at("config").at("space") == "heisenberg");

    REQUIRE(j.at("records").size() == 2);
    const json& r0 = j["records"][0];
    for (const char* key : {"p", "L", "candidate", "excluded", "requested", "evaluated",
                            "skipped", "max_rel_residual", "mean_rel_residual",
                            "median_rel_residual", "wall_ms"})
        CHECK(r0.contains(key));
    CHECK(r0["p"].get<double>() == 3.0);
    CHECK(!r0.contains("shape")); // Heisenberg records carry no shape
    const json& r1 = j["records"][1];
    CHECK(r1["excluded"].get<bool>());
    CHECK(r1["skipped"].at("ExcludedParameter").get<int>() == 30);
}

TEST_CASE("infinity records serialize p as null; Grushin records carry the shape") {
    SweepConfig cfg;
    cfg.space = Space::Grushin;
    cfg.shape = {0.5, -1.0, 2.0, 2};
    cfg.kind = CandidateKind::Infinity;
    cfg.grid = {{2.0, 0.4}};
    cfg.points = 10;
    ResidualReport rep = run_sweep(cfg);
    RunManifest man = make_manifest("verify", config_to_json(cfg), cfg.seed);
    json j = report_to_json(rep, man);
    const json& r = j["records"][0];
    CHECK(r.at("p").is_null());
    CHECK(r.at("shape").at("a").get<double>() == 0.5);
    CHECK(r.at("shape").at("n").get<int>() == 2);
}

TEST_CASE("a serialized report parses back with bit-identical statistics") {
    ResidualReport rep = small_report();
    RunManifest man = make_manifest("verify", config_to_json(rep.config), rep.config.seed);
    ResidualReport back = report_from_json(report_to_json(rep, man));
    CHECK(back.pass == rep.pass);
    REQUIRE(back.records.size() == rep.records.size());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const SweepRecord &a = rep.records[i], &b = back.records[i];
        CHECK(a.params.p == b.params.p);
        CHECK(a.params.L == b.params.L);
        CHECK(a.candidate == b.candidate);
        CHECK(a.excluded == b.excluded);
        CHECK(a.requested == b.requested);
        CHECK(a.evaluated == b.evaluated);
        CHECK(a.skipped == b.skipped);
        CHECK(a.max_rel_residual == b.max_rel_residual);   // bitwise
        CHECK(a.mean_rel_residual == b.mean_rel_residual);
        CHECK(a.median_rel_residual == b.median_rel_residual);
        CHECK(a.wall_ms == b.wall_ms);
    }
}

TEST_CASE("canonical reports are byte-identical across runs and thread counts") {
    SweepConfig cfg;
    cfg.grid = {{1.5, -0.5}, {3.0, 0.4}};
    cfg.points = 40;
    auto canonical = [&cfg] {
        ResidualReport rep = run_sweep(cfg);
        RunManifest man = make_manifest("verify", config_to_json(cfg), cfg.seed);
        return report_to_json(rep, man, /*include_volatile=*/false).dump();
    };
    std::string first = canonical();
    CHECK(first.find("wall_ms") == std::string::npos);
    CHECK(first.find("timestamp") == std::string::npos);
    CHECK(canonical() == first);
    setenv("DRIFTLAP_THREADS", "1", 1);
    std::string serial = canonical();
    setenv("DRIFTLAP_THREADS", "5", 1);
    std::string threaded = canonical();
    unsetenv("DRIFTLAP_THREADS");
    CHECK(serial == first);
    CHECK(threaded == first);

    // the hash tracks the config: a different seed gives a different manifest
    RunManifest a = make_manifest("verify", config_to_json(cfg), cfg.seed);
    SweepConfig other = cfg;
    other.seed = 43;
    RunManifest b = make_manifest("verify", config_to_json(other), other.seed);
    CHECK(a.config_hash != b.config_hash);
    CHECK(a.config_hash == make_manifest("verify", config_to_json(cfg), cfg.seed).config_hash);
}

TEST_CASE("delta and diagram reports serialize their key fields") {
    DeltaMassEstimate est =
        delta_mass(Space::Heisenberg, std::nullopt, {2.0, 1.0}, {0.2, 0.1}, 64);
    RunManifest man = make_manifest("delta", json{{"p", 2.0}, {"L", 1.0}}, 0);
    json dj = delta_to_json(est, man, kDeltaStability);
    CHECK(dj.at("degenerate").get<bool>());
    CHECK(dj.at("stable").get<bool>());
    REQUIRE(dj.at("masses").size() == 2);
    CHECK(dj["masses"][0].is_array()); // complex as [re, im]
    CHECK(dj["masses"][0][0].get<double>() == 0.0);
    CHECK(dj["masses"][0][1].get<double>() == 0.0);
    CHECK(dj.at("ladder")[0].get<double>() == 0.2);

    std::vector<HPoint> cloud = h_sample_shell(3, 5, 0.5, 4.0);
    DiagramReport rep = diagram_check(cloud, {10.0, 100.0}, {0.5, 0.1});
    json gj = diagram_to_json(rep, make_manifest("diagram", json::object(), 3));
    for (const char* key : {"p_ladder", "L_ladder", "p_value_dev", "L_value_dev",
                            "p_path_max_residual", "L_path_max_residual",
                            "infinity_max_residual", "corner_value_dev",
                            "corner_exponent_dev", "pass"})
        CHECK(gj.contains(key));
}

TEST_CASE("CSV projections are flat with one row per record") {
    ResidualReport rep = small_report();
    std::string csv = report_to_csv(rep);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header
          == "p,L,a,b,c,n,candidate,excluded,requested,evaluated,skipped,"
             "max_rel_residual,mean_rel_residual,median_rel_residual,wall_ms");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 2);

    DeltaMassEstimate est =
        delta_mass(Space::Heisenberg, std::nullopt, {2.0, 1.0}, {0.2, 0.1}, 64);
    std::string dcsv = delta_to_csv(est);
    CHECK(dcsv.find("eps,mass_re,mass_im") == 0);
    CHECK(std::count(dcsv.begin(), dcsv.end(), '\n') == 3); // header + 2 ladder rows
}

// ---------------------------------------------------------------------------
// End-to-end exit codes
// ---------------------------------------------------------------------------

TEST_CASE("cli: verify sweep passes and writes a parseable report") {
    std::string out = temp_path("driftlap_cli_verify.json");
    CliResult res = cli({"verify", "--space", "heisenberg", "--candidate", "power", "--p",
                         "2,3,5", "--L", "0,0.4", "--points", "50", "--seed", "42", "--tol",
                         "1e-8", "--out", out});
    CHECK(res.code == 0);
    CHECK(res.out.find("pass") != std::string::npos);
    json j = load_json(out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["records"].size() == 6);
    CHECK(j["manifest"]["subcommand"] == "verify");
}

TEST_CASE("cli: excluded grid cells warn but do not fail the run") {
    CliResult res = cli({"verify", "--space", "grushin", "--p", "4", "--L", "0", "--n", "2",
                         "--points", "20"});
    CHECK(res.code == 0);
    CHECK(res.err.find("excluded") != std::string::npos);
}

TEST_CASE("cli: config errors exit 2, verification failures exit 1") {
    CHECK(cli({"verify", "--shell", "2:1"}).code == 2);
    CHECK(cli({"verify", "--shell", "oops"}).code == 2);
    CHECK(cli({"verify", "--candidate", "bgg2", "--p", "3", "--L", "0.5"}).code == 2);
    CHECK(cli({"verify", "--candidate", "legacy", "--L", "0.5"}).code == 2);
    CHECK(cli({"verify", "--points", "0"}).code == 2);
    CHECK(cli({"verify", "--space", "nowhere"}).code == 2);
    CHECK(cli({"verify", "--no-such-flag"}).code == 2);
    CHECK(cli({}).code == 2); // no subcommand: print help, config error

    // an honest failure: residuals ~1e-15 cannot meet an absurd tolerance
    CliResult fail = cli({"verify", "--p", "3", "--L", "0.4", "--points", "20", "--tol",
                          "1e-30"});
    CHECK(fail.code == 1);
    CHECK(fail.err.find("FAIL") != std::string::npos);
}

TEST_CASE("cli: delta exit codes and degenerate flag") {
    std::string out = temp_path("driftlap_cli_delta.json");
    CliResult degen = cli({"delta", "--p", "2", "--L", "1", "--resolution", "32", "--out", out});
    CHECK(degen.code == 0);
    CHECK(degen.out.find("degenerate") != std::string::npos);
    json j = load_json(out);
    CHECK(j["degenerate"].get<bool>());
    CHECK(j["stable"].get<bool>());

    CHECK(cli({"delta", "--resolution", "8"}).code == 2);
    CHECK(cli({"delta", "--eps", "0.1,0.2"}).code == 2); // increasing ladder
    CHECK(cli({"delta", "--p", "3", "--L", "0.25"}).code == 2); // excluded locus

    // divergent box integral (n even): computed, flagged, exit 1
    CliResult unstable = cli({"delta", "--space", "grushin", "--n", "2", "--p", "3", "--L",
                              "0.4", "--resolution", "32", "--eps", "0.2,0.1"});
    CHECK(unstable.code == 1);
    CHECK(unstable.err.find("UNSTABLE") != std::string::npos);
}

TEST_CASE("cli: diagram exit codes") {
    std::string out = temp_path("driftlap_cli_diagram.json");
    CliResult res = cli({"diagram", "--points", "10", "--out", out});
    CHECK(res.code == 0);
    CHECK(load_json(out)["pass"].get<bool>());

    CliResult gru = cli({"diagram", "--space", "grushin", "--n", "3", "--points", "10"});
    CHECK(gru.code == 0);

    // an L ladder crossing the excluded value 1/3 for the p = 10 edge
    CHECK(cli({"diagram", "--p", "10", "--L", "0.5,0.33333333333333331,0.1", "--points",
               "5"}).code == 2);
}

TEST_CASE("cli: csv format and version flag") {
    std::string out = temp_path("driftlap_cli_verify.csv");
    CliResult res = cli({"verify", "--p", "3", "--L", "0.4", "--points", "20", "--format",
                         "csv", "--out", out});
    CHECK(res.code == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("p,L,", 0) == 0);

    CHECK(cli({"--version"}).code == 0);
    CHECK(cli({"verify", "--format", "yaml"}).code == 2);
}
