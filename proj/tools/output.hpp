#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dualwave::cli {

enum class Format { csv, json };

// Column-major table. Text columns carry labels; numeric NaN is written as a
// missing value.
struct Column {
    std::string name;  // includes the unit, e.g. "x[l_p]"
    std::vector<double> numbers;
    std::vector<std::string> text;  // used when non-empty
};

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::deque<Column> columns;  // deque: add() references stay valid

    Column& add(std::string name);
    Column& add_text(std::string name);
    std::size_t rows() const;
};

// Writes `stem` + ".csv" or ".json" into dir and returns the file name.
std::string write_table(const Table& t, const std::string& dir, const std::string& stem, Format f);

// 8-bit binary PGM scaled to the finite maximum; NaN pixels are black.
// Row 0 of the image is the top (largest y).
std::string write_pgm(const std::vector<double>& values, std::size_t nx, std::size_t ny, const std::string& dir,
                      const std::string& stem);

// Shortest round-trip text of a double.
std::string format_number(double v);

}  // namespace dualwave::cli
