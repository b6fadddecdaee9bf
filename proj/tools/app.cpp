#include "app.hpp"

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dualwave/errors.hpp"
#include "manifest.hpp"

#ifndef DUALWAVE_FIGURES_DIR
#define DUALWAVE_FIGURES_DIR "figures"
#endif

namespace dualwave::cli {
namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Flags {
    std::string config;
    std::string out = ".";
    std::string format;
    bool raster = false;
    unsigned threads = 0;
    std::string probe;
    std::vector<std::string> set;
};

void add_run_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "INI recipe or a manifest.json to replay");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--raster", f.raster, "also write PGM rasters of grid channels");
    sub->add_option("--threads", f.threads, "worker threads for grid fills (0 = all cores)");
    sub->add_option("--probe", f.probe, "x0,y0,x1,y1[,samples] probe line for fringe analysis");
    sub->add_option("--set", f.set, "override a parameter: section.key=value (repeatable)");
}

RunOptions resolve_options(const Flags& f, const std::map<std::string, std::string>& recorded)
{
    RunOptions o;
    o.out_dir = f.out;
    o.threads = f.threads;
    auto rec = [&recorded](const char* key) {
        const auto it = recorded.find(key);
        return it == recorded.end() ? std::string() : it->second;
    };
    const std::string format = !f.format.empty() ? f.format : rec("format");
    o.format = format == "json" ? Format::json : Format::csv;
    o.raster = f.raster || rec("raster") == "true";
    o.probe = !f.probe.empty() ? f.probe : rec("probe");
    return o;
}

int run_subcommand(const std::string& command, const Flags& f)
{
    std::map<std::string, std::string> file_values;
    std::map<std::string, std::string> recorded;
    if (!f.config.empty()) {
        if (std::filesystem::path(f.config).extension() == ".json") {
            const RunManifest m = read_manifest(f.config);
            if (m.command != command) {
                throw ConfigError("manifest '" + f.config + "' records command '" + m.command + "', not '" + command + "'");
            }
            file_values = m.parameters;
            recorded = m.options;
        } else {
            file_values = read_ini(f.config);
        }
    }
    const ParamSet params = ParamSet::resolve(command, file_values, parse_overrides(f.set));
    const RunResult r = run_with_manifest(params, resolve_options(f, recorded));
    for (const std::string& file : r.files) {
        std::cout << (std::filesystem::path(f.out) / file).string() << "\n";
    }
    return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"dualwave: quasiparticle dual-wave simulations and figure data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DUALWAVE_VERSION);

    Flags flags;
    std::string chosen;
    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " computation");
        add_run_flags(sub, flags);
        sub->callback([&chosen, name] { chosen = name; });
    }

    std::string figure_id;
    std::string recipes = DUALWAVE_FIGURES_DIR;
    CLI::App* fig = app.add_subcommand("figures", "regenerate figure data from the recipe files");
    fig->add_option("id", figure_id, "all | fig1..fig7 | recipe name")->required();
    fig->add_option("--recipes", recipes, "recipe directory");
    fig->add_option("--out", flags.out, "output directory");
    fig->add_option("--format", flags.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    fig->add_flag("--raster", flags.raster, "also write PGM rasters");
    fig->add_option("--threads", flags.threads, "worker threads");
    fig->callback([&chosen] { chosen = "figures"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (chosen == "figures") {
            run_figures(recipes, figure_id, resolve_options(flags, {}));
            return kOk;
        }
        return run_subcommand(chosen, flags);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace dualwave::cli
