#include "driftlap/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftlap/report.hpp"
#include "driftlap/verify.hpp"

namespace driftlap {

namespace {

using nlohmann::json;

// Defaults shared by the subcommands (also documented in the README).
constexpr double kDefaultShellMin = 0.5;
constexpr double kDefaultShellMax = 4.0;
constexpr int kDefaultPoints = 200;
constexpr double kDefaultTol = 1e-8;
constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kDefaultMargin = 0.1;
constexpr int kDefaultResolution = 64;
constexpr int kDefaultCloudPoints = 20;
const std::vector<double> kDefaultEpsLadder{0.2, 0.1, 0.05};
const std::vector<double> kDefaultPLadder{10.0, 100.0, 1000.0, 10000.0};
const std::vector<double> kDefaultLLadder{0.5, 0.25, 0.1, 0.01};

Space parse_space(const std::string& s) {
    if (s == "heisenberg") return Space::Heisenberg;
    if (s == "grushin") return Space::Grushin;
    throw EvalError(ErrorKind::ConfigInvalid, "unknown space: " + s);
}

CandidateKind parse_candidate(const std::string& s) {
    for (CandidateKind k : {CandidateKind::Power, CandidateKind::Legacy, CandidateKind::BGG2,
                            CandidateKind::Infinity})
        if (s == to_string(k)) return k;
    throw EvalError(ErrorKind::ConfigInvalid, "unknown candidate family: " + s);
}

std::pair<double, double> parse_shell(const std::string& s) {
    std::size_t colon = s.find(':');
    if (colon == std::string::npos)
        throw EvalError(ErrorKind::ConfigInvalid, "shell must be MIN:MAX");
    try {
        std::size_t used = 0;
        double lo = std::stod(s.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(s);
        std::string rest = s.substr(colon + 1);
        double hi = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
        return {lo, hi};
    } catch (const std::exception&) {
        throw EvalError(ErrorKind::ConfigInvalid, "shell must be MIN:MAX with numeric bounds");
    }
}

// Write the report to --out (with a one-line summary on stdout), or dump it to
// stdout with the summary on stderr so the report stays pipeable.
void emit(const std::string& body, const std::string& out_path, const std::string& summary) {
    if (out_path.empty()) {
        std::cout << body << '\n';
        std::cerr << summary << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw EvalError(ErrorKind::ConfigInvalid, "cannot open output file: " + out_path);
    out << body << '\n';
    std::cout << summary << " -> " << out_path << '\n';
}

struct ShapeFlags {
    double a = 0.0, b = 0.0, c = 1.0;
    int n = 1;
    GrushinShape shape() const { return {a, b, c, n}; }
};

void add_shape_flags(CLI::App* cmd, ShapeFlags& sf) {
    cmd->add_option("--a", sf.a, "Grushin shape offset a (default 0)");
    cmd->add_option("--b", sf.b, "Grushin shape offset b (default 0)");
    cmd->add_option("--c", sf.c, "Grushin frame coefficient c != 0 (default 1)");
    cmd->add_option("--n", sf.n, "Grushin exponent n >= 1 (default 1)");
}

struct VerifyFlags {
    std::string space = "heisenberg";
    std::string candidate = "power";
    std::vector<double> ps{2.0};
    std::vector<double> Ls{0.0};
    ShapeFlags shape;
    int points = kDefaultPoints;
    std::string shell = "0.5:4.0";
    std::uint64_t seed = kDefaultSeed;
    double tol = kDefaultTol;
    double margin = kDefaultMargin;
    bool allow_left = false;
    std::string out;
    std::string format = "json";
};

int run_verify(const VerifyFlags& vf) {
    SweepConfig cfg;
    cfg.space = parse_space(vf.space);
    cfg.kind = parse_candidate(vf.candidate);
    for (double p : vf.ps)
        for (double L : vf.Ls) cfg.grid.push_back({p, L});
    cfg.shape = vf.shape.shape();
    cfg.points = vf.points;
    std::tie(cfg.r_min, cfg.r_max) = parse_shell(vf.shell);
    cfg.seed = vf.seed;
    cfg.tolerance = vf.tol;
    cfg.margin = vf.margin;
    cfg.allow_left_half_plane = vf.allow_left;

    ResidualReport rep = run_sweep(cfg);
    for (const SweepRecord& rec : rep.records)
        if (rec.excluded)
            std::cerr << "warning: cell (p=" << rec.params.p << ", L=" << rec.params.L
                      << ") is on the excluded parameter locus; skipped\n";

    RunManifest man = make_manifest("verify", config_to_json(cfg), cfg.seed);
    std::string body = vf.format == "csv" ? report_to_csv(rep)
                                          : report_to_json(rep, man).dump(2);
    char summary[128];
    std::snprintf(summary, sizeof summary, "%s: %zu cells, max residual %.3g",
                  rep.pass ? "pass" : "FAIL", rep.records.size(),
                  std::accumulate(rep.records.begin(), rep.records.end(), 0.0,
                                  [](double m, const SweepRecord& r) {
                                      return std::max(m, r.max_rel_residual);
                                  }));
    emit(body, vf.out, summary);
    return rep.pass ? 0 : 1;
}

struct DeltaFlags {
    std::string space = "heisenberg";
    double p = 2.0;
    double L = 0.0;
    ShapeFlags shape;
    std::vector<double> eps = kDefaultEpsLadder;
    int resolution = kDefaultResolution;
    double stability = kDeltaStability;
    std::string out;
    std::string format = "json";
};

int run_delta(const DeltaFlags& df) {
    Space space = parse_space(df.space);
    std::optional<GrushinShape> shape;
    if (space == Space::Grushin) shape = df.shape.shape();
    DeltaMassEstimate est = delta_mass(space, shape, {df.p, df.L}, df.eps, df.resolution);

    json cfg{{"space", df.space},       {"p", df.p},
             {"L", df.L},               {"eps", df.eps},
             {"resolution", df.resolution}, {"stability", df.stability}};
    if (shape) cfg["shape"] = {{"a", shape->a}, {"b", shape->b}, {"c", shape->c}, {"n", shape->n}};
    RunManifest man = make_manifest("delta", std::move(cfg), 0);
    std::string body = df.format == "csv" ? delta_to_csv(est)
                                          : delta_to_json(est, man, df.stability).dump(2);
    bool ok = est.stable(df.stability);
    char summary[160];
    std::snprintf(summary, sizeof summary,
                  "%s: %zu masses, pairwise deviation %.3g%s", ok ? "stable" : "UNSTABLE",
                  est.masses.size(), est.max_pairwise_deviation,
                  est.degenerate ? " (degenerate: identically zero)" : "");
    emit(body, df.out, summary);
    return ok ? 0 : 1;
}

struct DiagramFlags {
    std::string space = "heisenberg";
    std::vector<double> p_ladder = kDefaultPLadder;
    std::vector<double> L_ladder = kDefaultLLadder;
    ShapeFlags shape;
    int points = kDefaultCloudPoints;
    std::string shell = "0.5:4.0";
    std::uint64_t seed = kDefaultSeed;
    double margin = kDefaultMargin;
    bool allow_left = false;
    std::string out;
};

int run_diagram(const DiagramFlags& gf) {
    Space space = parse_space(gf.space);
    auto [r_min, r_max] = parse_shell(gf.shell);
    DiagramReport rep;
    if (space == Space::Heisenberg) {
        rep = diagram_check(h_sample_shell(gf.seed, gf.points, r_min, r_max), gf.p_ladder,
                            gf.L_ladder);
    } else {
        GrushinShape sh = gf.shape.shape();
        rep = diagram_check(sh,
                            g_sample_shell(gf.seed, gf.points, sh, r_min, r_max, gf.margin,
                                           gf.allow_left),
                            gf.p_ladder, gf.L_ladder);
    }

    json cfg{{"space", gf.space},   {"p_ladder", gf.p_ladder}, {"L_ladder", gf.L_ladder},
             {"points", gf.points}, {"shell", {r_min, r_max}}, {"seed", gf.seed}};
    if (space == Space::Grushin) {
        cfg["shape"] = {{"a", gf.shape.a}, {"b", gf.shape.b}, {"c", gf.shape.c}, {"n", gf.shape.n}};
        cfg["margin"] = gf.margin;
    }
    RunManifest man = make_manifest("diagram", std::move(cfg), gf.seed);
    char summary[160];
    std::snprintf(summary, sizeof summary,
                  "%s: value gaps %.3g (p), %.3g (L); corner %.3g",
                  rep.pass ? "pass" : "FAIL",
                  rep.p_value_dev.empty() ? 0.0 : rep.p_value_dev.back(),
                  rep.L_value_dev.empty() ? 0.0 : rep.L_value_dev.back(),
                  rep.corner_value_dev);
    emit(diagram_to_json(rep, man).dump(2), gf.out, summary);
    return rep.pass ? 0 : 1;
}

} // namespace

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"Residual sweeps, delta-mass quadrature, and limit-diagram checks for "
                 "drift p-Laplace candidates on the Heisenberg group and Grushin-type planes"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);

    VerifyFlags vf;
    CLI::App* verify = app.add_subcommand(
        "verify", "Sweep a (p, L) grid and check operator residuals against tolerance");
    verify->add_option("--space", vf.space, "heisenberg | grushin (default heisenberg)")
        ->check(CLI::IsMember({"heisenberg", "grushin"}));
    verify->add_option("--candidate", vf.candidate,
                       "power | legacy | bgg2 | infinity (default power)")
        ->check(CLI::IsMember({"power", "legacy", "bgg2", "infinity"}));
    verify->add_option("--p", vf.ps, "comma-separated p values (default 2)")->delimiter(',');
    verify->add_option("--L", vf.Ls, "comma-separated L values (default 0)")->delimiter(',');
    add_shape_flags(verify, vf.shape);
    verify->add_option("--points", vf.points, "sample points per grid cell (default 200)");
    verify->add_option("--shell", vf.shell, "gauge shell MIN:MAX (default 0.5:4.0)");
    verify->add_option("--seed", vf.seed, "sampler seed (default 42)");
    verify->add_option("--tol", vf.tol, "max relative residual per cell (default 1e-8)");
    verify->add_option("--margin", vf.margin,
                       "Grushin: minimum |y1 - a| when sampling (default 0.1)");
    verify->add_flag("--allow-left", vf.allow_left,
                     "Grushin: also sample where c (y1-a)^{n+1} < 0");
    verify->add_option("--out", vf.out, "write the report here instead of stdout");
    verify->add_option("--format", vf.format, "json | csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));

    DeltaFlags df;
    CLI::App* delta = app.add_subcommand(
        "delta", "Integrate the mollified residual over the rescaled box per epsilon");
    delta->add_option("--space", df.space, "heisenberg | grushin (default heisenberg)")
        ->check(CLI::IsMember({"heisenberg", "grushin"}));
    delta->add_option("--p", df.p, "p value (default 2)");
    delta->add_option("--L", df.L, "L value (default 0)");
    add_shape_flags(delta, df.shape);
    delta->add_option("--eps", df.eps, "comma-separated epsilon ladder (default 0.2,0.1,0.05)")
        ->delimiter(',');
    delta->add_option("--resolution", df.resolution,
                      "midpoint cells per axis, >= 32 (default 64)");
    delta->add_option("--stability", df.stability,
                      "max pairwise mass deviation to accept (default 0.02)");
    delta->add_option("--out", df.out, "write the report here instead of stdout");
    delta->add_option("--format", df.format, "json | csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));

    DiagramFlags gf;
    CLI::App* diagram = app.add_subcommand(
        "diagram", "Check the p -> infinity / L -> 0 limit diagram on a point cloud");
    diagram->add_option("--space", gf.space, "heisenberg | grushin (default heisenberg)")
        ->check(CLI::IsMember({"heisenberg", "grushin"}));
    diagram->add_option("--p", gf.p_ladder,
                        "increasing p ladder (default 10,100,1000,10000)")
        ->delimiter(',');
    diagram->add_option("--L", gf.L_ladder,
                        "decreasing L ladder toward 0 (default 0.5,0.25,0.1,0.01)")
        ->delimiter(',');
    add_shape_flags(diagram, gf.shape);
    diagram->add_option("--points", gf.points, "cloud size (default 20)");
    diagram->add_option("--shell", gf.shell, "gauge shell MIN:MAX (default 0.5:4.0)");
    diagram->add_option("--seed", gf.seed, "sampler seed (default 42)");
    diagram->add_option("--margin", gf.margin,
                        "Grushin: minimum |y1 - a| when sampling (default 0.1)");
    diagram->add_flag("--allow-left", gf.allow_left,
                      "Grushin: also sample where c (y1-a)^{n+1} < 0");
    diagram->add_option("--out", gf.out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // flag/usage problems are config errors
    }

    try {
        if (verify->parsed()) return run_verify(vf);
        if (delta->parsed()) return run_delta(df);
        if (diagram->parsed()) return run_diagram(gf);
        std::cerr << app.help();
        return 2;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace driftlap
