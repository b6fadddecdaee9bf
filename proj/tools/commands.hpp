#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "output.hpp"
#include "params.hpp"

namespace dualwave::cli {

struct RunOptions {
    std::string out_dir = ".";
    Format format = Format::csv;
    bool raster = false;
    unsigned threads = 0;
    std::string probe;  // "x0,y0,x1,y1[,samples]"; empty = none
};

struct RunResult {
    std::vector<std::string> files;  // relative to out_dir
    std::vector<std::pair<std::string, std::string>> derived;
};

// Validates the parameters, runs the command and writes its data files.
// Throws ConfigError / DomainError for bad input, NumericalError subclasses
// for numerical failures.
RunResult run_command(const ParamSet& params, const RunOptions& options);

// Runs a command and writes manifest.json next to its outputs.
RunResult run_with_manifest(const ParamSet& params, const RunOptions& options);

// Figure recipes: "all", a figure prefix ("fig3") or an exact recipe stem.
std::vector<std::string> select_recipes(const std::string& recipe_dir, const std::string& id);
void run_figures(const std::string& recipe_dir, const std::string& id, const RunOptions& options);

}  // namespace dualwave::cli
