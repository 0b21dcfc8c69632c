#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "otlab/cantor.hpp"
#include "otlab/field.hpp"
#include "otlab/interval_set.hpp"
#include "otlab/measure.hpp"

namespace otlab {

// JSON readers.  Schema violations raise InputError with the file, JSON path
// and offending line where available.  The published schemas live under
// schemas/ in the repository root.
Measure1D read_measure_json(const std::filesystem::path& file);
Measure1D parse_measure_json(const std::string& text, const std::string& origin = "<string>");

CantorSpec read_cantor_json(const std::filesystem::path& file);
CantorSpec parse_cantor_json(const std::string& text, const std::string& origin = "<string>");
// Realized depth requested by the spec file ("depth" key), clamped nowhere;
// callers validate against the spec's depth limit.
int cantor_json_depth(const std::string& text, const std::string& origin = "<string>");

MeasureField read_field_json(const std::filesystem::path& file);
MeasureField parse_field_json(const std::string& text, const std::string& origin = "<string>");

IntervalSet read_intervals_json(const std::filesystem::path& file);
IntervalSet parse_intervals_json(const std::string& text, const std::string& origin = "<string>");

// 17-significant-digit decimal formatting: lossless for binary64.
std::string format_double(double v);

// FNV-1a over the canonical configuration string.
std::uint64_t config_hash(const std::string& canonical_config);

// CSV writer with a reproducibility manifest header; the file appears
// atomically (temp file + rename).
class CsvWriter {
public:
    CsvWriter(std::vector<std::string> columns, std::string manifest);
    void add_row(const std::vector<double>& values);
    void add_comment(const std::string& line);
    // Writes everything to `file` atomically.
    void write(const std::filesystem::path& file) const;
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::string manifest_;
    std::vector<std::string> lines_;
};

} // namespace otlab
