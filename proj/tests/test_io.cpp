#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "allelofear/io.hpp"

using namespace allelofear;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

json base_config() {
    return json{{"params", {{"a", 0.3}, {"b", 0.2}, {"c", 1.1}, {"k", 1.1}, {"m", 0.15}}},
                {"analysis", {{"kind", "equilibria"}}}};
}

#ifdef ALLELOFEAR_BIN
struct CliRun {
    int exit_code;
    std::string stdout_text;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const std::string cmd =
        std::string(ALLELOFEAR_BIN) + " " + args + " > " + out.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {WEXITSTATUS(rc), text};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::current_path() / ("io_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}
#endif

} // namespace

TEST_CASE("config parsing validates structure and parameters") {
    SECTION("a minimal equilibria config") {
        const RunConfig cfg = parse_config(base_config());
        CHECK(cfg.kind == "equilibria");
        CHECK(cfg.params.a == 0.3);
        CHECK(cfg.params.k == 1.1);
        CHECK(cfg.formats == std::vector<std::string>{"json", "csv"});
    }
    SECTION("raw parameters are nondimensionalized on ingestion") {
        json doc = base_config();
        doc.erase("params");
        doc["raw_params"] = {{"r1", 1.0}, {"r2", 2.0}, {"alpha1", 1.0}, {"alpha2", 2.0},
                             {"beta1", 1.0}, {"beta2", 1.0}, {"eta", 1.0}, {"xi", 1.0}};
        const RunConfig cfg = parse_config(doc);
        CHECK(cfg.params.b == Approx(0.5));
        CHECK(cfg.params.m == Approx(0.5));
    }
    SECTION("rejections name the problem") {
        json doc = base_config();
        doc["raw_params"] = {{"r1", 1.0}};
        CHECK_THROWS_WITH(parse_config(doc), Catch::Matchers::ContainsSubstring("not both"));

        doc = base_config();
        doc["params"]["a"] = -1.0;
        CHECK_THROWS_WITH(parse_config(doc), Catch::Matchers::ContainsSubstring("a must be"));

        doc = base_config();
        doc["analysis"] = {{"kind", "mystery"}};
        CHECK_THROWS_WITH(parse_config(doc), Catch::Matchers::ContainsSubstring("mystery"));

        doc = base_config();
        doc.erase("analysis");
        CHECK_THROWS_AS(parse_config(doc), ConfigError);

        doc = base_config();
        doc["formats"] = {"yaml"};
        CHECK_THROWS_WITH(parse_config(doc), Catch::Matchers::ContainsSubstring("yaml"));

        doc = base_config();
        doc["params"].erase("m");
        CHECK_THROWS_WITH(parse_config(doc), Catch::Matchers::ContainsSubstring("'m'"));
    }
    SECTION("the emitted echo re-ingests to an equivalent config") {
        const RunConfig cfg = parse_config(base_config());
        const RunConfig again = parse_config(cfg.echo);
        CHECK(again.kind == cfg.kind);
        CHECK(again.params.a == cfg.params.a);
        CHECK(again.params.b == cfg.params.b);
        CHECK(again.params.c == cfg.params.c);
        CHECK(again.params.k == cfg.params.k);
        CHECK(again.params.m == cfg.params.m);
        CHECK(again.echo == cfg.echo);
    }
}

TEST_CASE("17-significant-digit formatting round-trips doubles") {
    for (double x : {1.0 / 3.0, 0.1, 0.1262554731, 1e-300, 6.02214076e23, -0.0, 2.0}) {
        const std::string s = fmt17(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("envelopes are deterministic apart from the timestamp") {
    const RunConfig cfg = parse_config(base_config());
    json env1 = make_envelope(cfg, json{{"answer", 42}});
    json env2 = make_envelope(cfg, json{{"answer", 42}});
    CHECK(env1.contains("timestamp"));
    CHECK(env1["tool_version"] == kVersion);
    env1.erase("timestamp");
    env2.erase("timestamp");
    CHECK(env1.dump() == env2.dump());
}

TEST_CASE("atomic_write leaves only the final artifact") {
    const fs::path dir = fs::current_path() / "io_test_atomic";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path target = dir / "report.json";
    atomic_write(target, "{\"ok\":true}\n");
    REQUIRE(fs::exists(target));
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "{\"ok\":true}\n");
    fs::remove_all(dir);
}

TEST_CASE("fear-field configs build the right fields") {
    json f = {{"kind", "shifted_sine"}, {"kappa0", 3.0}, {"kappa1", 1.0}, {"omega", 10.0},
              {"n", 64}};
    const FearField field = field_from_json(f);
    CHECK(field.k_hat == 3.0);
    CHECK(field.k_tilde == 4.0);
    CHECK(field.size() == 64);

    CHECK_THROWS_AS(field_from_json(json{{"kind", "nope"}}), ConfigError);
    CHECK_THROWS_AS(field_from_json(json{{"kind", "constant"}}), ConfigError);
    CHECK_THROWS_AS(field_from_json(json{{"kind", "constant"}, {"kappa", 0.0}, {"n", 64}}),
                    ConfigError); // constant zero violates assumption (iii)
}

TEST_CASE("structured JSON exports carry the documented fields") {
    const ModelParams p{0.3, 0.2, 1.1, 1.1, 0.15};
    SECTION("equilibrium entries") {
        const json j = equilibrium_to_json(all_equilibria(p).front());
        for (const char* key : {"label", "x", "y", "kind", "eigenvalues", "residual",
                                "multiplicity"})
            CHECK(j.contains(key));
    }
    SECTION("diagram matches the published schema") {
        const json j = diagram_to_json(scan(p, 'm', 0.09, 0.16, 9));
        CHECK(j["parameter"] == "m");
        REQUIRE(j["samples"].is_array());
        CHECK(j["samples"].size() == 9);
        for (const char* key : {"value", "equilibria"}) CHECK(j["samples"][0].contains(key));
        CHECK(j["samples"][0]["equilibria"][0].contains("kind"));
        CHECK(j["samples"][0]["equilibria"][0].contains("multiplicity"));
        REQUIRE(j["events"].is_array());
        REQUIRE(j["events"].size() == 1);
        for (const char* key : {"value", "bracket", "kind"}) CHECK(j["events"][0].contains(key));
    }
}

#ifdef ALLELOFEAR_BIN

TEST_CASE("CLI: equilibria subcommand is deterministic and exits 0") {
    const fs::path dir = fresh_dir("equilibria");
    write_file(dir / "cfg.json", base_config().dump());
    const CliRun r1 = run_cli("equilibria --config " + (dir / "cfg.json").string() + " --out " +
                                  dir.string(),
                              dir);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(fs::exists(dir / "equilibria.json"));

    json env1, env2;
    {
        std::ifstream in(dir / "equilibria.json");
        in >> env1;
    }
    const CliRun r2 = run_cli("equilibria --config " + (dir / "cfg.json").string() + " --out " +
                                  dir.string(),
                              dir);
    REQUIRE(r2.exit_code == 0);
    {
        std::ifstream in(dir / "equilibria.json");
        in >> env2;
    }
    env1.erase("timestamp");
    env2.erase("timestamp");
    CHECK(env1.dump() == env2.dump());
    CHECK(env1["results"]["existence_case"].contains("row"));
    CHECK(env1["results"]["equilibria"].size() >= 3);
    fs::remove_all(dir);
}

TEST_CASE("CLI: config errors exit with code 2") {
    const fs::path dir = fresh_dir("badcfg");
    write_file(dir / "cfg.json", "{\"params\": {\"a\": -1}}");
    CHECK(run_cli("equilibria --config " + (dir / "cfg.json").string(), dir).exit_code == 2);
    CHECK(run_cli("equilibria --config " + (dir / "missing.json").string(), dir).exit_code == 2);

    json doc = base_config();
    doc["analysis"]["kind"] = "simulate_ode"; // kind mismatch against the subcommand
    write_file(dir / "cfg2.json", doc.dump());
    CHECK(run_cli("equilibria --config " + (dir / "cfg2.json").string(), dir).exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("CLI: ODE simulation writes the trajectory CSV") {
    const fs::path dir = fresh_dir("simode");
    json doc = base_config();
    doc["analysis"] = {{"kind", "simulate_ode"}, {"init", {0.5, 0.5}}, {"t_end", 50.0}};
    write_file(dir / "cfg.json", doc.dump());
    const CliRun r = run_cli("simulate --config " + (dir / "cfg.json").string() + " --out " +
                                 dir.string(),
                             dir);
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "trajectory.csv"));
    std::ifstream csv(dir / "trajectory.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x,y");
    json env;
    {
        std::ifstream in(dir / "simulate.json");
        in >> env;
    }
    CHECK(env["results"].contains("summary"));
    CHECK(env["results"].contains("permanence"));
    fs::remove_all(dir);
}

TEST_CASE("CLI: PDE divergence guard maps to exit code 3") {
    const fs::path dir = fresh_dir("simpde");
    json doc = base_config();
    doc["analysis"] = {{"kind", "simulate_pde"},
                       {"fear_field",
                        {{"kind", "shifted_sine"}, {"kappa0", 3.0}, {"kappa1", 1.0},
                         {"omega", 10.0}, {"n", 64}}},
                       {"init", {12.0, 0.4}},
                       {"t_end", 1.0}};
    write_file(dir / "cfg.json", doc.dump());
    CHECK(run_cli("simulate --config " + (dir / "cfg.json").string() + " --out " + dir.string(),
                  dir)
              .exit_code == 3);
    fs::remove_all(dir);
}

TEST_CASE("CLI: PDE simulation reports the terminal verdict") {
    const fs::path dir = fresh_dir("simpde2");
    json doc = base_config();
    doc["analysis"] = {{"kind", "simulate_pde"},
                       {"fear_field",
                        {{"kind", "shifted_sine"}, {"kappa0", 3.0}, {"kappa1", 1.0},
                         {"omega", 10.0}, {"n", 64}}},
                       {"init", {2.0, 0.4}},
                       {"t_end", 150.0},
                       {"snapshot_count", 10}};
    write_file(dir / "cfg.json", doc.dump());
    const CliRun r = run_cli("simulate --config " + (dir / "cfg.json").string() + " --out " +
                                 dir.string(),
                             dir);
    REQUIRE(r.exit_code == 0);
    json env;
    {
        std::ifstream in(dir / "simulate.json");
        in >> env;
    }
    CHECK(env["results"]["summary"] == "(1,0) uniform");
    CHECK(fs::exists(dir / "pde_series.csv"));
    CHECK(fs::exists(dir / "fear_field.csv"));
    std::ifstream csv(dir / "pde_series.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x,u,v");
    fs::remove_all(dir);
}

TEST_CASE("CLI: bifurcation scan emits the diagram and transversality reports") {
    const fs::path dir = fresh_dir("bif");
    json doc = base_config();
    doc["params"] = {{"a", 0.8}, {"b", 0.5}, {"c", 0.5}, {"k", 0.3}, {"m", 0.5}};
    doc["analysis"] = {{"kind", "bifurcation_scan"}, {"parameter", "k"}, {"lo", 0.1},
                       {"hi", 0.5}, {"n", 21}};
    write_file(dir / "cfg.json", doc.dump());
    const CliRun r = run_cli("bifurcation --config " + (dir / "cfg.json").string() + " --out " +
                                 dir.string(),
                             dir);
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "diagram.json"));
    json diagram;
    {
        std::ifstream in(dir / "diagram.json");
        in >> diagram;
    }
    REQUIRE(diagram["events"].size() == 1);
    CHECK(diagram["events"][0]["kind"] == "transcritical-E1");
    CHECK(std::abs(diagram["events"][0]["value"].get<double>() - 0.25) < 1e-6);
    REQUIRE(diagram["transversality"].size() == 1);
    CHECK(diagram["transversality"][0]["report"]["verdict"] == "satisfied");
    fs::remove_all(dir);
}

TEST_CASE("CLI: verify runs a named suite and exits 0 on success") {
    const fs::path dir = fresh_dir("verify");
    const CliRun r = run_cli("verify pitchfork", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("criterion  3") != std::string::npos);
    CHECK(r.stdout_text.find("PASS") != std::string::npos);

    const CliRun bad = run_cli("verify no-such-suite", dir);
    CHECK(bad.exit_code != 0);
    fs::remove_all(dir);
}

#endif // ALLELOFEAR_BIN
