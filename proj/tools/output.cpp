#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include "json.hpp"

namespace dualwave::cli {
namespace {

void write_file(const std::string& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

std::string join_path(const std::string& dir, const std::string& name)
{
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

Column& Table::add(std::string name)
{
    columns.push_back(Column{std::move(name), {}, {}});
    return columns.back();
}

Column& Table::add_text(std::string name) { return add(std::move(name)); }

std::size_t Table::rows() const
{
    if (columns.empty()) {
        return 0;
    }
    const Column& c = columns.front();
    return c.text.empty() ? c.numbers.size() : c.text.size();
}

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "";
    }
    return fmt::format("{}", v);
}

std::string write_table(const Table& t, const std::string& dir, const std::string& stem, Format f)
{
    const std::size_t n = t.rows();
    for (const Column& c : t.columns) {
        const std::size_t m = c.text.empty() ? c.numbers.size() : c.text.size();
        if (m != n && !(m == 0 && n == 0)) {
            throw std::logic_error("table column '" + c.name + "' has a mismatched length");
        }
    }

    if (f == Format::json) {
        nlohmann::ordered_json doc;
        doc["metadata"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : t.metadata) {
            doc["metadata"][k] = v;
        }
        doc["columns"] = nlohmann::ordered_json::array();
        for (const Column& c : t.columns) {
            doc["columns"].push_back(c.name);
        }
        doc["rows"] = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < n; ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (const Column& c : t.columns) {
                if (!c.text.empty()) {
                    row.push_back(c.text[r]);
                } else if (std::isnan(c.numbers[r])) {
                    row.push_back(nullptr);
                } else {
                    row.push_back(c.numbers[r]);
                }
            }
            doc["rows"].push_back(std::move(row));
        }
        const std::string name = stem + ".json";
        write_file(join_path(dir, name), doc.dump(1) + "\n");
        return name;
    }

    fmt::memory_buffer buf;
    for (const auto& [k, v] : t.metadata) {
        fmt::format_to(std::back_inserter(buf), "# {} = {}\n", k, v);
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        fmt::format_to(std::back_inserter(buf), "{}{}", c ? "," : "", t.columns[c].name);
    }
    buf.push_back('\n');
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (c) {
                buf.push_back(',');
            }
            const Column& col = t.columns[c];
            if (!col.text.empty()) {
                fmt::format_to(std::back_inserter(buf), "{}", col.text[r]);
            } else if (!std::isnan(col.numbers[r])) {
                fmt::format_to(std::back_inserter(buf), "{}", col.numbers[r]);
            }
        }
        buf.push_back('\n');
    }
    const std::string name = stem + ".csv";
    write_file(join_path(dir, name), fmt::to_string(buf));
    return name;
}

std::string write_pgm(const std::vector<double>& values, std::size_t nx, std::size_t ny, const std::string& dir,
                      const std::string& stem)
{
    double peak = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            peak = std::max(peak, std::abs(v));
        }
    }
    std::string body = fmt::format("P5\n{} {}\n255\n", nx, ny);
    body.reserve(body.size() + nx * ny);
    for (std::size_t row = 0; row < ny; ++row) {
        const std::size_t j = ny - 1 - row;
        for (std::size_t i = 0; i < nx; ++i) {
            const double v = values[j * nx + i];
            double level = 0.0;
            if (std::isfinite(v) && peak > 0.0) {
                level = std::round(255.0 * std::abs(v) / peak);
            }
            body.push_back(static_cast<char>(static_cast<unsigned char>(level)));
        }
    }
    const std::string name = stem + ".pgm";
    write_file(join_path(dir, name), body);
    return name;
}

}  // namespace dualwave::cli
