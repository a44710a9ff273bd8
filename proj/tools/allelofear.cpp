#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "allelofear/acceptance.hpp"
#include "allelofear/io.hpp"
#include "allelofear/ode.hpp"

namespace af = allelofear;
using af::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::string suite = "all";
};

af::RunConfig apply_cli_overrides(af::RunConfig cfg, const CliOptions& cli) {
    if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
    if (!cli.format.empty()) cfg.formats = {cli.format};
    return cfg;
}

void write_outputs(const af::RunConfig& cfg, const CliOptions& cli, const json& envelope,
                   const std::string& stem) {
    const std::string dir = cli.out_dir.empty() ? cfg.output_dir : cli.out_dir;
    if (cfg.wants("json"))
        af::atomic_write(std::filesystem::path(dir) / (stem + ".json"), envelope.dump(2) + "\n");
    std::cout << envelope.dump(2) << std::endl;
}

int cmd_equilibria(const af::RunConfig& cfg, const CliOptions& cli) {
    const af::ModelParams& p = cfg.params;
    json results;
    const af::Thresholds th = af::thresholds(p);
    results["thresholds"] = {{"k_star", th.k_star}, {"m_star", th.m_star},
                             {"m_double_star", th.m_dstar}, {"m1", th.m1}, {"m2", th.m2}};
    results["equilibria"] = json::array();
    for (const af::Equilibrium& e : af::all_equilibria(p))
        results["equilibria"].push_back(af::equilibrium_to_json(e));
    results["existence_case"] = af::existence_case_to_json(af::existence_case(p));
    write_outputs(cfg, cli, af::make_envelope(cfg, results), "equilibria");
    return 0;
}

std::string classify_ode_outcome(const af::ModelParams& p, const af::State2& fin) {
    if (fin.y < 1e-3 && std::abs(fin.x - 1.0) < 1e-2) return "y-extinction";
    if (fin.x < 1e-3 && std::abs(fin.y - 1.0) < 1e-2) return "x-extinction";
    for (const af::Equilibrium& e : af::interior_equilibria(p))
        if (e.kind == af::EquilibriumKind::InteriorStableNode &&
            std::hypot(fin.x - e.location.x, fin.y - e.location.y) < 1e-3)
            return "coexistence";
    return "undecided";
}

int cmd_simulate(const af::RunConfig& cfg, const CliOptions& cli) {
    const json& an = cfg.analysis;
    const std::string dir = cli.out_dir.empty() ? cfg.output_dir : cli.out_dir;
    json results;

    if (cfg.kind == "simulate_ode") {
        if (!an.contains("init") || !an["init"].is_array() || an["init"].size() != 2)
            throw af::ConfigError("simulate_ode: 'init' must be [x0, y0]");
        const af::State2 init{an["init"][0].get<double>(), an["init"][1].get<double>()};
        const double t_end = an.value("t_end", 500.0);
        const double rel = an.value("rel_tol", 1e-8);
        const double abs = an.value("abs_tol", 1e-10);

        af::Trajectory traj;
        try {
            traj = af::integrate(cfg.params, init, t_end, rel, abs);
        } catch (const af::DomainError& e) {
            throw af::ConfigError(std::string("simulate_ode: ") + e.what());
        }
        const af::State2 fin = traj.final_state();
        results["terminal_state"] = {fin.x, fin.y};
        results["summary"] = classify_ode_outcome(cfg.params, fin);
        results["accepted_steps"] = traj.stats.accepted;
        results["rejected_steps"] = traj.stats.rejected;
        const af::PermanenceBounds pb = af::permanence_bounds(cfg.params);
        results["permanence"] = {{"upper_M", pb.upper_M}, {"lower_l", pb.lower_l},
                                 {"certified", pb.certified}};
        results["artifacts"] = json::array();
        if (cfg.wants("csv")) {
            std::ostringstream csv;
            af::trajectory_to_csv(traj, csv);
            af::atomic_write(std::filesystem::path(dir) / "trajectory.csv", csv.str());
            results["artifacts"].push_back("trajectory.csv");
        }
    } else { // simulate_pde
        if (!an.contains("fear_field"))
            throw af::ConfigError("simulate_pde: 'fear_field' object required");
        const af::FearField field = af::field_from_json(an["fear_field"]);
        // flat [u0, v0] (the default analysis setting) or sampled {"u":[...],"v":[...]}
        std::vector<double> u0, v0;
        if (an.contains("init") && an["init"].is_array() && an["init"].size() == 2) {
            u0.assign(field.size(), an["init"][0].get<double>());
            v0.assign(field.size(), an["init"][1].get<double>());
        } else if (an.contains("init") && an["init"].is_object() && an["init"].contains("u") &&
                   an["init"].contains("v")) {
            u0 = an["init"]["u"].get<std::vector<double>>();
            v0 = an["init"]["v"].get<std::vector<double>>();
            if (u0.size() != field.size() || v0.size() != field.size())
                throw af::ConfigError("simulate_pde: sampled init must match the field grid size");
        } else {
            throw af::ConfigError(
                "simulate_pde: 'init' must be flat [u0, v0] or sampled {\"u\":[...],\"v\":[...]}");
        }
        const double t_end = an.value("t_end", 500.0);
        const double dt = an.value("dt_ctrl", 0.02);
        const int n_snap = an.value("snapshot_count", 50);

        std::vector<double> snaps;
        for (int i = 1; i <= n_snap; ++i) snaps.push_back(t_end * i / n_snap);
        const double d1 = an.value("d1", 1.0), d2 = an.value("d2", 1.0);
        const af::ReactionParams rp = af::reaction_params(cfg.params);
        const auto series = af::integrate_pde(rp, field, d1, d2, u0, v0, t_end, dt, snaps);
        const auto conv =
            af::detect_convergence(series, af::interior_candidates_for(rp, field), 1e-3);

        results["summary"] = conv.verdict == "none" ? conv.verdict : conv.verdict + " uniform";
        results["attained"] = {conv.attained.x, conv.attained.y};
        results["oscillation"] = {conv.oscillation_u, conv.oscillation_v};
        results["k_hat"] = field.k_hat;
        results["k_tilde"] = field.k_tilde;
        results["artifacts"] = json::array();
        if (cfg.wants("csv")) {
            af::atomic_write(std::filesystem::path(dir) / "pde_series.csv",
                             af::pde_series_to_csv(series, field));
            af::atomic_write(std::filesystem::path(dir) / "fear_field.csv",
                             af::field_to_csv(field));
            results["artifacts"] = {"pde_series.csv", "fear_field.csv"};
        }
    }
    write_outputs(cfg, cli, af::make_envelope(cfg, results), "simulate");
    return 0;
}

int cmd_bifurcation(const af::RunConfig& cfg, const CliOptions& cli) {
    const json& an = cfg.analysis;
    if (!an.contains("parameter") || !an["parameter"].is_string() ||
        an["parameter"].get<std::string>().size() != 1)
        throw af::ConfigError("bifurcation_scan: 'parameter' must be one of a, b, c, k, m");
    const char param = an["parameter"].get<std::string>()[0];
    const double lo = af::detail::require_number(an, "lo", "bifurcation_scan");
    const double hi = af::detail::require_number(an, "hi", "bifurcation_scan");
    const int n = an.value("n", 41);

    af::BifurcationDiagram diagram;
    try {
        diagram = af::scan(cfg.params, param, lo, hi, n);
    } catch (const af::DomainError& e) {
        throw af::ConfigError(std::string("bifurcation_scan: ") + e.what());
    }
    json results = af::diagram_to_json(diagram);
    results["transversality"] = json::array();
    for (const af::DiagramEvent& ev : diagram.events) {
        json entry;
        entry["event_value"] = ev.value;
        try {
            entry["report"] =
                af::transversality_to_json(af::transversality_at_event(cfg.params, ev, param));
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        results["transversality"].push_back(entry);
    }
    const std::string dir = cli.out_dir.empty() ? cfg.output_dir : cli.out_dir;
    af::atomic_write(std::filesystem::path(dir) / "diagram.json", results.dump(2) + "\n");
    write_outputs(cfg, cli, af::make_envelope(cfg, results), "bifurcation");
    return 0;
}

int cmd_verify(const af::RunConfig* cfg, const CliOptions& cli) {
    const std::string suite =
        (cfg && cfg->analysis.contains("suite")) ? cfg->analysis["suite"].get<std::string>()
                                                 : cli.suite;
    const auto results = af::run_acceptance(suite);
    json arr = json::array();
    int failed = 0;
    for (const af::CriterionResult& r : results) {
        std::printf("criterion %2d [%s] %s (%.1fs < %.0fs budget): %s\n", r.id, r.suite.c_str(),
                    r.pass ? "PASS" : "FAIL", r.runtime_s, r.budget_s, r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
        arr.push_back({{"id", r.id}, {"suite", r.suite}, {"name", r.name}, {"pass", r.pass},
                       {"runtime_s", r.runtime_s}, {"budget_s", r.budget_s},
                       {"detail", r.detail}});
    }
    json results_json;
    results_json["criteria"] = arr;
    results_json["summary"] = {{"total", results.size()},
                               {"failed", failed},
                               {"pass", failed == 0}};
    if (cfg) {
        const std::string dir = cli.out_dir.empty() ? cfg->output_dir : cli.out_dir;
        af::atomic_write(std::filesystem::path(dir) / "verify.json",
                         af::make_envelope(*cfg, results_json).dump(2) + "\n");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
                results.size());
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"allelofear: fear-effect allelopathic competition model toolkit"};
    app.require_subcommand(1);
    CliOptions cli;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        sub->add_option("--config", cli.config_path, "JSON run configuration")
            ->required(config_required);
        sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
        sub->add_option("--format", cli.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* eq = app.add_subcommand("equilibria", "equilibrium inventory and classification");
    add_common(eq, true);
    CLI::App* sim = app.add_subcommand("simulate", "ODE / PDE time integration");
    add_common(sim, true);
    CLI::App* bif = app.add_subcommand("bifurcation", "one-parameter scan with event detection");
    add_common(bif, true);
    CLI::App* ver = app.add_subcommand("verify", "run the acceptance suites");
    add_common(ver, false);
    ver->add_option("suite", cli.suite, "suite name or 'all'");

    CLI11_PARSE(app, argc, argv);

    try {
        af::RunConfig cfg;
        const bool have_cfg = !cli.config_path.empty();
        if (have_cfg) cfg = apply_cli_overrides(af::load_config(cli.config_path), cli);

        if (eq->parsed()) {
            if (cfg.kind != "equilibria")
                throw af::ConfigError("config analysis.kind must be 'equilibria'");
            return cmd_equilibria(cfg, cli);
        }
        if (sim->parsed()) {
            if (cfg.kind != "simulate_ode" && cfg.kind != "simulate_pde")
                throw af::ConfigError("config analysis.kind must be simulate_ode or simulate_pde");
            return cmd_simulate(cfg, cli);
        }
        if (bif->parsed()) {
            if (cfg.kind != "bifurcation_scan")
                throw af::ConfigError("config analysis.kind must be 'bifurcation_scan'");
            return cmd_bifurcation(cfg, cli);
        }
        if (ver->parsed()) return cmd_verify(have_cfg ? &cfg : nullptr, cli);
    } catch (const af::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const af::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const af::PreconditionError& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 3;
    } catch (const af::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
