#include "kaczmarz/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

constexpr const char* kHeader = "solver,seed,k,modeled_ops,residual,error_sq,weighted_error_sq,envelope\n";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string seed_text(const std::optional<std::uint64_t>& s) { return s ? std::to_string(*s) : "mean"; }

std::vector<TraceRow> sorted_rows(const TraceTable& table) {
  std::vector<TraceRow> rows = table.rows;
  // nullopt seed (the mean) sorts last within a solver
  std::stable_sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) {
    auto key = [](const TraceRow& r) {
      return std::make_tuple(std::cref(r.solver), !r.seed.has_value(), r.seed.value_or(0), r.k);
    };
    return key(a) < key(b);
  });
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_double(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

TraceFormat parse_trace_format(const std::string& name) {
  if (name == "csv") return TraceFormat::Csv;
  if (name == "json") return TraceFormat::Json;
  throw InvalidArgument("unknown trace format '" + name + "' (expected csv or json)");
}

std::string traces_to_csv(const TraceTable& table) {
  std::string out = kHeader;
  for (const TraceRow& r : sorted_rows(table)) {
    out += csv_field(r.solver);
    out += ',' + seed_text(r.seed) + ',' + std::to_string(r.k) + ',' + num(r.modeled_ops) + ',' + num(r.residual) +
           ',' + num(r.error_sq) + ',' + num(r.weighted_error_sq) + ',' + num(r.envelope) + '\n';
  }
  return out;
}

std::string traces_to_json(const TraceTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TraceRow& r : sorted_rows(table)) {
    rows.push_back({{"solver", r.solver},
                    {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json("mean")},
                    {"k", r.k},
                    {"modeled_ops", r.modeled_ops},
                    {"residual", r.residual},
                    {"error_sq", opt_json(r.error_sq)},
                    {"weighted_error_sq", opt_json(r.weighted_error_sq)},
                    {"envelope", opt_json(r.envelope)}});
  }
  nlohmann::json doc = {{"rows", rows}, {"notes", table.notes}};
  return doc.dump(1) + '\n';
}

TraceTable traces_from_json(const std::string& text) {
  TraceTable table;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("rows")) {
      TraceRow r;
      r.solver = j.at("solver").get<std::string>();
      const auto& seed = j.at("seed");
      if (seed.is_number_unsigned()) r.seed = seed.get<std::uint64_t>();
      r.k = j.at("k").get<std::size_t>();
      r.modeled_ops = j.at("modeled_ops").get<double>();
      r.residual = j.at("residual").get<double>();
      r.error_sq = opt_double(j.at("error_sq"));
      r.weighted_error_sq = opt_double(j.at("weighted_error_sq"));
      r.envelope = opt_double(j.at("envelope"));
      table.rows.push_back(std::move(r));
    }
    if (doc.contains("notes")) table.notes = doc["notes"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("trace json: ") + e.what());
  }
  return table;
}

void export_traces(const TraceTable& table, TraceFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (format == TraceFormat::Csv ? traces_to_csv(table) : traces_to_json(table));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace kaczmarz
