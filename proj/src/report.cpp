#include "driftlap/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace driftlap {

namespace {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json shape_to_json(const GrushinShape& sh) {
    return {{"a", sh.a}, {"b", sh.b}, {"c", sh.c}, {"n", sh.n}};
}

ErrorKind kind_from_string(const std::string& name) {
    for (ErrorKind k : {ErrorKind::ZeroBase, ErrorKind::BranchGuard, ErrorKind::SingularPoint,
                        ErrorKind::ExcludedParameter, ErrorKind::DegenerateGradient,
                        ErrorKind::DegenerateLine, ErrorKind::ConfigInvalid,
                        ErrorKind::ResolutionTooLow})
        if (name == to_string(k)) return k;
    throw EvalError(ErrorKind::ConfigInvalid, "unknown error kind in report: " + name);
}

std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

const char* to_string(Space space) {
    return space == Space::Heisenberg ? "heisenberg" : "grushin";
}

std::string iso_timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

json config_to_json(const SweepConfig& cfg) {
    json grid = json::array();
    for (const DriftParams& cell : cfg.grid) grid.push_back({cell.p, cell.L});
    json j{{"space", to_string(cfg.space)},
           {"candidate", to_string(cfg.kind)},
           {"grid", std::move(grid)},
           {"points", cfg.points},
           {"shell", {cfg.r_min, cfg.r_max}},
           {"seed", cfg.seed},
           {"tolerance", cfg.tolerance}};
    if (cfg.kind == CandidateKind::Mollified) j["epsilon"] = cfg.epsilon;
    if (cfg.space == Space::Grushin) {
        j["shape"] = shape_to_json(cfg.shape);
        j["margin"] = cfg.margin;
        j["allow_left_half_plane"] = cfg.allow_left_half_plane;
    }
    return j;
}

RunManifest make_manifest(const std::string& subcommand, json config, std::uint64_t seed) {
    RunManifest man;
    man.subcommand = subcommand;
    man.config = std::move(config);
    man.seed = seed;
    man.timestamp = iso_timestamp_utc();
    man.config_hash = fnv1a_hex(man.config.dump());
    return man;
}

json manifest_to_json(const RunManifest& man, bool include_volatile) {
    json j{{"subcommand", man.subcommand},
           {"config", man.config},
           {"version", man.version},
           {"seed", man.seed},
           {"config_hash", man.config_hash}};
    if (include_volatile) j["timestamp"] = man.timestamp;
    return j;
}

json report_to_json(const ResidualReport& rep, const RunManifest& man, bool include_volatile) {
    json records = json::array();
    for (const SweepRecord& rec : rep.records) {
        json r{{"p", rec.infinity ? json(nullptr) : json(rec.params.p)},
               {"L", rec.params.L},
               {"candidate", rec.candidate},
               {"excluded", rec.excluded},
               {"requested", rec.requested},
               {"evaluated", rec.evaluated},
               {"max_rel_residual", rec.max_rel_residual},
               {"mean_rel_residual", rec.mean_rel_residual},
               {"median_rel_residual", rec.median_rel_residual}};
        if (rep.config.space == Space::Grushin) r["shape"] = shape_to_json(rep.config.shape);
        json skipped = json::object();
        for (const auto& [kind, count] : rec.skipped) skipped[to_string(kind)] = count;
        r["skipped"] = std::move(skipped);
        if (include_volatile) r["wall_ms"] = rec.wall_ms;
        records.push_back(std::move(r));
    }
    json j{{"schema_version", kSchemaVersion},
           {"manifest", manifest_to_json(man, include_volatile)},
           {"records", std::move(records)},
           {"pass", rep.pass}};
    if (include_volatile) j["wall_ms"] = rep.wall_ms;
    return j;
}

json delta_to_json(const DeltaMassEstimate& est, const RunManifest& man, double stability_tol,
                   bool include_volatile) {
    json masses = json::array();
    for (const Complex& m : est.masses) masses.push_back(complex_to_json(m));
    json j{{"schema_version", kSchemaVersion},
           {"manifest", manifest_to_json(man, include_volatile)},
           {"space", to_string(est.space)},
           {"p", est.params.p},
           {"L", est.params.L},
           {"ladder", est.ladder},
           {"masses", std::move(masses)},
           {"max_pairwise_deviation", est.max_pairwise_deviation},
           {"resolution", est.resolution},
           {"degenerate", est.degenerate},
           {"doubling_deviation", est.doubling_deviation},
           {"quadrature_converged", est.quadrature_converged},
           {"stability", stability_tol},
           {"stable", est.stable(stability_tol)}};
    if (est.shape) j["shape"] = shape_to_json(*est.shape);
    return j;
}

json diagram_to_json(const DiagramReport& rep, const RunManifest& man, bool include_volatile) {
    json j{{"schema_version", kSchemaVersion},
           {"manifest", manifest_to_json(man, include_volatile)},
           {"space", to_string(rep.space)},
           {"p_ladder", rep.p_ladder},
           {"L_ladder", rep.L_ladder},
           {"p_edge", rep.p_edge},
           {"L_edge", rep.L_edge},
           {"p_value_dev", rep.p_value_dev},
           {"L_value_dev", rep.L_value_dev},
           {"p_path_max_residual", rep.p_path_max_residual},
           {"L_path_max_residual", rep.L_path_max_residual},
           {"infinity_max_residual", rep.infinity_max_residual},
           {"corner_value_dev", rep.corner_value_dev},
           {"corner_exponent_dev", rep.corner_exponent_dev},
           {"pass", rep.pass}};
    if (rep.shape) j["shape"] = shape_to_json(*rep.shape);
    return j;
}

ResidualReport report_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw EvalError(ErrorKind::ConfigInvalid, "unsupported report schema version");
    ResidualReport rep;
    rep.pass = j.at("pass").get<bool>();
    if (j.contains("wall_ms")) rep.wall_ms = j["wall_ms"].get<double>();
    for (const json& r : j.at("records")) {
        SweepRecord rec;
        rec.infinity = r.at("p").is_null();
        rec.params.p = rec.infinity ? std::numeric_limits<double>::infinity()
                                    : r["p"].get<double>();
        rec.params.L = r.at("L").get<double>();
        rec.candidate = r.at("candidate").get<std::string>();
        rec.excluded = r.at("excluded").get<bool>();
        rec.requested = r.at("requested").get<int>();
        rec.evaluated = r.at("evaluated").get<int>();
        rec.max_rel_residual = r.at("max_rel_residual").get<double>();
        rec.mean_rel_residual = r.at("mean_rel_residual").get<double>();
        rec.median_rel_residual = r.at("median_rel_residual").get<double>();
        for (const auto& [name, count] : r.at("skipped").items())
            rec.skipped[kind_from_string(name)] = count.get<int>();
        if (r.contains("wall_ms")) rec.wall_ms = r["wall_ms"].get<double>();
        if (r.contains("shape")) {
            rep.config.space = Space::Grushin;
            const json& sh = r["shape"];
            rep.config.shape = {sh.at("a").get<double>(), sh.at("b").get<double>(),
                                sh.at("c").get<double>(), sh.at("n").get<int>()};
        }
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

std::string report_to_csv(const ResidualReport& rep) {
    std::ostringstream out;
    out << "p,L,a,b,c,n,candidate,excluded,requested,evaluated,skipped,"
           "max_rel_residual,mean_rel_residual,median_rel_residual,wall_ms\n";
    for (const SweepRecord& rec : rep.records) {
        out << (rec.infinity ? "inf" : csv_double(rec.params.p)) << ','
            << csv_double(rec.params.L) << ',';
        if (rep.config.space == Space::Grushin)
            out << csv_double(rep.config.shape.a) << ',' << csv_double(rep.config.shape.b)
                << ',' << csv_double(rep.config.shape.c) << ',' << rep.config.shape.n << ',';
        else
            out << ",,,,";
        out << rec.candidate << ',' << (rec.excluded ? "true" : "false") << ','
            << rec.requested << ',' << rec.evaluated << ',';
        bool first = true;
        for (const auto& [kind, count] : rec.skipped) {
            if (!first) out << ';';
            out << to_string(kind) << ':' << count;
            first = false;
        }
        out << ',' << csv_double(rec.max_rel_residual) << ','
            << csv_double(rec.mean_rel_residual) << ','
            << csv_double(rec.median_rel_residual) << ',' << csv_double(rec.wall_ms) << '\n';
    }
    return out.str();
}

std::string delta_to_csv(const DeltaMassEstimate& est) {
    std::ostringstream out;
    out << "eps,mass_re,mass_im,resolution,degenerate,max_pairwise_deviation,"
           "doubling_deviation,quadrature_converged\n";
    for (std::size_t i = 0; i < est.ladder.size(); ++i) {
        Complex m = i < est.masses.size() ? est.masses[i] : Complex{0.0, 0.0};
        out << csv_double(est.ladder[i]) << ',' << csv_double(m.real()) << ','
            << csv_double(m.imag()) << ',' << est.resolution << ','
            << (est.degenerate ? "true" : "false") << ','
            << csv_double(est.max_pairwise_deviation) << ','
            << csv_double(est.doubling_deviation) << ','
            << (est.quadrature_converged ? "true" : "false") << '\n';
    }
    return out.str();
}

} // namespace driftlap
