#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualwave::cli {

// Bad configuration: unknown key, malformed value, violated precondition.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KeySpec {
    std::string default_value;
    std::string help;
};

// Allowed keys of one command, "section.key" -> spec.
using Schema = std::map<std::string, KeySpec>;

const Schema& schema_for(const std::string& command);
const std::vector<std::string>& command_names();

// Resolved parameters of a run. Values stay as text so a manifest can replay
// them verbatim.
class ParamSet {
public:
    ParamSet() = default;
    ParamSet(std::string command, std::map<std::string, std::string> values);

    // Defaults from the schema, then the file, then overrides. Unknown keys throw.
    static ParamSet resolve(const std::string& command, const std::map<std::string, std::string>& file_values,
                            const std::map<std::string, std::string>& overrides);

    const std::string& command() const { return command_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string str(const std::string& key) const;
    double num(const std::string& key) const;
    std::size_t count(const std::string& key) const;  // non-negative integer
    bool flag(const std::string& key) const;
    std::vector<double> nums(const std::string& key) const;     // comma separated
    std::vector<std::string> words(const std::string& key) const;
    std::string choice(const std::string& key, const std::vector<std::string>& allowed) const;

private:
    std::string command_;
    std::map<std::string, std::string> values_;
};

// INI file flattened to "section.key". Keys outside a section are rejected.
std::map<std::string, std::string> read_ini(const std::string& path);

// "section.key=value" override strings.
std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& items);

}  // namespace dualwave::cli
