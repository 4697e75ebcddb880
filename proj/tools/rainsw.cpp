// Command-line driver: `run` a scenario to CSV files, `verify` the acceptance suites.
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rainsw/acceptance.hpp"
#include "rainsw/config.hpp"
#include "rainsw/scenarios.hpp"
#include "rainsw/stepper.hpp"

namespace {

using namespace rainsw;

Overrides parse_sets(const std::vector<std::string>& sets)
{
    Overrides o;
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
        o[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return o;
}

// A built-in name, or a JSON file. On a file that names a built-in, --set
// values go into its parameters; on a fully custom file a key is a dotted
// path such as run.final_time or friction.alpha.
Scenario resolve(const std::string& what, const Overrides& sets)
{
    if (is_scenario_name(what)) return build(what, sets);
    if (sets.empty()) return load_scenario(what);
    std::ifstream in(what);
    if (!in) throw std::runtime_error("no scenario named '" + what + "' and no such file");
    std::stringstream ss;
    ss << in.rdbuf();
    auto doc = nlohmann::json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return parse_scenario(ss.str());
    if (doc.contains("scenario")) {
        for (const auto& [k, v] : sets) doc["parameters"][k] = v;
    } else {
        for (const auto& [k, v] : sets) {
            auto value = nlohmann::json::parse(v, nullptr, false);
            if (value.is_discarded()) value = v;
            doc[nlohmann::json::json_pointer("/" + std::regex_replace(k, std::regex("\\."), "/"))] = value;
        }
    }
    return parse_scenario(doc.dump());
}

int run_command(const std::string& scenario, const std::vector<std::string>& sets, const std::string& out_dir,
                const std::vector<double>& snapshots, const std::vector<double>& probes, bool snapshots_given,
                bool probes_given)
{
    Scenario s = resolve(scenario, parse_sets(sets));
    if (snapshots_given) s.snapshots = snapshots;
    if (probes_given) s.probes = probes;
    s.validate();
    const RunOutputs out = run(s);
    write_outputs(out, out_dir);
    double audit = 0.0;
    for (double e : mass_audit(out.mass_series())) audit = std::max(audit, e);
    std::printf("%s: t=%s steps=%ld mass_audit_error=%.3e\n", s.name.c_str(), format_number(out.final_time).c_str(),
                out.steps, audit);
    return 0;
}

int verify_command(const std::string& suite)
{
    std::vector<int> ids;
    if (suite == "all" || suite == "acceptance") {
        for (int i = 1; i <= static_cast<int>(acceptance::criteria().size()); ++i) ids.push_back(i);
    } else if (suite.size() > 1 && suite[0] == 'c') {
        int id = 0;
        const auto [p, ec] = std::from_chars(suite.data() + 1, suite.data() + suite.size(), id);
        if (ec != std::errc() || p != suite.data() + suite.size() || id < 1 ||
            id > static_cast<int>(acceptance::criteria().size()))
            throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");
        ids.push_back(id);
    } else {
        throw CLI::ValidationError("--suite", "unknown suite '" + suite + "' (all, acceptance, c1..c10)");
    }
    int failed = 0;
    for (int id : ids) {
        const auto r = acceptance::evaluate(id);
        std::cout << acceptance::report_line(r) << std::endl;
        failed += r.passed ? 0 : 1;
    }
    std::cout << ids.size() - static_cast<std::size_t>(failed) << "/" << ids.size() << " passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"1D Saint-Venant solver with rain and infiltration"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run a scenario and write CSV outputs");
    std::string scenario, out_dir;
    std::vector<std::string> sets;
    std::vector<double> snapshots, probes;
    run_cmd->add_option("--scenario", scenario, "built-in name or JSON file")->required();
    run_cmd->add_option("--set", sets, "override key=value (repeatable)");
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    auto* snap_opt = run_cmd->add_option("--snapshots", snapshots, "snapshot times")->delimiter(',');
    auto* probe_opt = run_cmd->add_option("--probes", probes, "probe positions")->delimiter(',');

    auto* verify_cmd = app.add_subcommand("verify", "run acceptance suites");
    std::string suite = "all";
    verify_cmd->add_option("--suite", suite, "all, acceptance or c1..c10");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : 2;
    }

    try {
        if (*run_cmd)
            return run_command(scenario, sets, out_dir, snapshots, probes, snap_opt->count() > 0,
                               probe_opt->count() > 0);
        return verify_command(suite);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
