#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "allelofear/bifurcation.hpp"
#include "allelofear/equilibria.hpp"
#include "allelofear/errors.hpp"
#include "allelofear/model.hpp"
#include "allelofear/pde.hpp"
#include "allelofear/version.hpp"

namespace allelofear {

using json = nlohmann::json;

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Parsed and validated run configuration. Keys are lower_snake_case; the
/// normalized echo re-ingests to an equivalent config.
struct RunConfig {
    ModelParams params{1, 1, 1, 1, 1};
    bool has_params = false;
    std::string kind; // equilibria | simulate_ode | simulate_pde | bifurcation_scan | verify
    json analysis;    // kind-specific options
    std::string output_dir = ".";
    std::vector<std::string> formats{"json", "csv"};
    json echo;

    bool wants(const std::string& fmt) const {
        return std::find(formats.begin(), formats.end(), fmt) != formats.end();
    }
};

namespace detail {

inline double require_number(const json& obj, const std::string& key, const char* ctx) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError(std::string(ctx) + ": missing or non-numeric field '" + key + "'");
    return obj[key].get<double>();
}

inline const json& require_object(const json& obj, const std::string& key, const char* ctx) {
    if (!obj.contains(key) || !obj[key].is_object())
        throw ConfigError(std::string(ctx) + ": missing object field '" + key + "'");
    return obj[key];
}

} // namespace detail

inline RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    RunConfig cfg;

    const bool has_nd = doc.contains("params");
    const bool has_raw = doc.contains("raw_params");
    if (has_nd && has_raw)
        throw ConfigError("config: give either 'params' or 'raw_params', not both");
    if (has_nd) {
        const json& p = detail::require_object(doc, "params", "config");
        cfg.params = ModelParams{detail::require_number(p, "a", "params"),
                                 detail::require_number(p, "b", "params"),
                                 detail::require_number(p, "c", "params"),
                                 detail::require_number(p, "k", "params"),
                                 detail::require_number(p, "m", "params")};
        try {
            cfg.params.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.has_params = true;
    } else if (has_raw) {
        const json& r = detail::require_object(doc, "raw_params", "config");
        if (doc.contains("nondimensionalize") && doc["nondimensionalize"] == false)
            throw ConfigError("config: raw_params requires nondimensionalize = true");
        RawParams raw{detail::require_number(r, "r1", "raw_params"),
                      detail::require_number(r, "r2", "raw_params"),
                      detail::require_number(r, "alpha1", "raw_params"),
                      detail::require_number(r, "alpha2", "raw_params"),
                      detail::require_number(r, "beta1", "raw_params"),
                      detail::require_number(r, "beta2", "raw_params"),
                      detail::require_number(r, "eta", "raw_params"),
                      detail::require_number(r, "xi", "raw_params")};
        try {
            cfg.params = nondimensionalize(raw);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.has_params = true;
    }

    const json& an = detail::require_object(doc, "analysis", "config");
    if (!an.contains("kind") || !an["kind"].is_string())
        throw ConfigError("config: analysis.kind must be a string");
    cfg.kind = an["kind"].get<std::string>();
    static const std::vector<std::string> kinds{"equilibria", "simulate_ode", "simulate_pde",
                                                "bifurcation_scan", "verify"};
    if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
        throw ConfigError("config: unknown analysis.kind '" + cfg.kind + "'");
    if (cfg.kind != "verify" && !cfg.has_params)
        throw ConfigError("config: 'params' or 'raw_params' required for analysis '" + cfg.kind + "'");
    cfg.analysis = an;

    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : doc["formats"]) {
            const std::string s = f.get<std::string>();
            if (s != "json" && s != "csv") throw ConfigError("config: unknown format '" + s + "'");
            cfg.formats.push_back(s);
        }
    }

    // normalized echo (numeric values round-trip bit-exactly through nlohmann)
    json echo;
    if (cfg.has_params)
        echo["params"] = {{"a", cfg.params.a}, {"b", cfg.params.b}, {"c", cfg.params.c},
                          {"k", cfg.params.k}, {"m", cfg.params.m}};
    echo["analysis"] = cfg.analysis;
    echo["output_dir"] = cfg.output_dir;
    echo["formats"] = cfg.formats;
    cfg.echo = echo;
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

/// All output files go through a temp-file + rename so readers never observe
/// a partially written artifact.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw NumericalError("atomic_write: cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    return buf;
}

inline json make_envelope(const RunConfig& cfg, json results) {
    json env;
    env["tool_version"] = kVersion;
    env["timestamp"] = iso8601_now();
    env["config"] = cfg.echo;
    env["results"] = std::move(results);
    return env;
}

inline json equilibrium_to_json(const Equilibrium& e) {
    json j;
    j["label"] = e.label;
    j["x"] = e.location.x;
    j["y"] = e.location.y;
    j["kind"] = to_string(e.kind);
    j["eigenvalues"] = {{e.eig1.real(), e.eig1.imag()}, {e.eig2.real(), e.eig2.imag()}};
    j["residual"] = e.residual;
    j["multiplicity"] = e.multiplicity;
    if (e.outside_proved_regime) j["outside_proved_regime"] = true;
    return j;
}

inline json existence_case_to_json(const ExistenceCase& ec) {
    json j;
    j["row"] = ec.row;
    j["labels"] = ec.labels;
    j["m_vs_m1"] = to_string(ec.m_vs_m1);
    j["c_vs_one"] = to_string(ec.c_vs_one);
    j["u_at_xv2"] = to_string(ec.u_at_xv2);
    j["m_vs_m2"] = to_string(ec.m_vs_m2);
    j["k_vs_kstar"] = to_string(ec.k_vs_kstar);
    return j;
}

inline json transversality_to_json(const TransversalityReport& rep) {
    json j;
    j["kind"] = to_string(rep.kind);
    j["threshold"] = rep.threshold;
    j["scalars"] = {rep.s1, rep.s2, rep.s3};
    j["verdict"] = to_string(rep.verdict);
    return j;
}

inline json diagram_to_json(const BifurcationDiagram& d) {
    json j;
    j["parameter"] = std::string(1, d.parameter);
    j["samples"] = json::array();
    for (const DiagramSample& s : d.samples) {
        json entry;
        entry["value"] = s.value;
        entry["equilibria"] = json::array();
        for (const Equilibrium& e : s.equilibria)
            entry["equilibria"].push_back({{"x", e.location.x},
                                           {"y", e.location.y},
                                           {"kind", to_string(e.kind)},
                                           {"multiplicity", e.multiplicity}});
        j["samples"].push_back(entry);
    }
    j["events"] = json::array();
    for (const DiagramEvent& ev : d.events)
        j["events"].push_back({{"value", ev.value},
                               {"bracket", {ev.bracket_lo, ev.bracket_hi}},
                               {"kind", to_string(ev.kind)}});
    return j;
}

/// Space-time CSV in long format: t,x,u,v with 17 significant digits.
inline std::string pde_series_to_csv(const std::vector<PDEState>& series,
                                     const FearField& field) {
    std::ostringstream os;
    os << "t,x,u,v\n";
    char buf[160];
    for (const PDEState& s : series)
        for (std::size_t j = 0; j < field.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.time, field.x[j],
                          s.u[j], s.v[j]);
            os << buf;
        }
    return os.str();
}

inline std::string field_to_csv(const FearField& field) {
    std::ostringstream os;
    os << "x,k\n";
    char buf[96];
    for (std::size_t j = 0; j < field.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", field.x[j], field.k[j]);
        os << buf;
    }
    return os.str();
}

/// Build a fear field from its config object.
inline FearField field_from_json(const json& f) {
    const double L = f.contains("length") ? f["length"].get<double>()
                                          : std::numbers::pi;
    const int n = f.contains("n") ? f["n"].get<int>() : 1000;
    const std::string kind = f.contains("kind") ? f["kind"].get<std::string>() : "";
    try {
        if (kind == "constant")
            return make_fear_field_constant(detail::require_number(f, "kappa", "fear_field"), L, n);
        if (kind == "shifted_sine")
            return make_fear_field_shifted_sine(detail::require_number(f, "kappa0", "fear_field"),
                                                detail::require_number(f, "kappa1", "fear_field"),
                                                detail::require_number(f, "omega", "fear_field"),
                                                L, n);
        if (kind == "tabulated") {
            if (!f.contains("samples") || !f["samples"].is_array())
                throw ConfigError("fear_field: tabulated kind needs a 'samples' array");
            return make_fear_field_tabulated(f["samples"].get<std::vector<double>>(), L);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("fear_field: ") + e.what());
    }
    throw ConfigError("fear_field: kind must be constant | shifted_sine | tabulated");
}

} // namespace allelofear
