#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dualwave::cli {

std::string sha256_file(const std::string& path);
std::string utc_timestamp();

struct OutputRecord {
    std::string file;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string version;
    std::string command;
    std::map<std::string, std::string> parameters;
    std::map<std::string, std::string> options;  // output-affecting flags (format, raster, probe)
    std::vector<std::pair<std::string, std::string>> derived;
    std::string started_utc;
    std::string finished_utc;
    std::vector<OutputRecord> outputs;
};

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace dualwave::cli
