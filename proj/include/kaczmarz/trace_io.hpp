#pragma once

#include <filesystem>
#include <string>

#include "kaczmarz/bench.hpp"

namespace kaczmarz {

enum class TraceFormat { Csv, Json };

TraceFormat parse_trace_format(const std::string& name);

/// Rows sorted by (solver, seed, k); the seed-mean rows carry seed "mean" and
/// sort after the numbered seeds. Missing values are empty cells / null.
std::string traces_to_csv(const TraceTable& table);
std::string traces_to_json(const TraceTable& table);

/// Reads the JSON produced by traces_to_json back (rows only).
TraceTable traces_from_json(const std::string& text);

void export_traces(const TraceTable& table, TraceFormat format, const std::filesystem::path& path);

}  // namespace kaczmarz
