#include "manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "params.hpp"

namespace dualwave::cli {

std::string sha256_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "' for hashing");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", md[i]);
    }
    return hex;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char text[32];
    std::strftime(text, sizeof text, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return text;
}

void write_manifest(const RunManifest& m, const std::string& path)
{
    nlohmann::ordered_json j;
    j["artifact"] = "dualwave";
    j["version"] = m.version;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["options"] = m.options;
    j["derived"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.derived) {
        j["derived"][k] = v;
    }
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& o : m.outputs) {
        j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write manifest '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read manifest '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
        RunManifest m;
        m.version = j.value("version", "");
        m.command = j.at("command").get<std::string>();
        m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
        if (j.contains("options")) {
            m.options = j.at("options").get<std::map<std::string, std::string>>();
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest '" + path + "' is malformed: " + e.what());
    }
}

}  // namespace dualwave::cli
