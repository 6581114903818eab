#include "kaczmarz/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/matrix_market.hpp"

namespace kaczmarz {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix) {
  return prefix.string() + suffix;
}

}  // namespace

std::string meta_to_json(const InstanceMeta& meta) {
  nlohmann::json j = {{"generator", meta.generator},
                      {"m", meta.m},
                      {"n", meta.n},
                      {"requested_m", meta.requested_m},
                      {"delta", meta.delta},
                      {"alpha", meta.alpha},
                      {"seed", meta.seed},
                      {"lambda_min", meta.lambda_min ? nlohmann::json(*meta.lambda_min) : nlohmann::json(nullptr)},
                      {"lambda_max", meta.lambda_max ? nlohmann::json(*meta.lambda_max) : nlohmann::json(nullptr)}};
  return j.dump(2) + '\n';
}

InstanceMeta meta_from_json(const std::string& text) {
  InstanceMeta meta;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    meta.generator = j.value("generator", std::string());
    meta.m = j.value("m", std::size_t{0});
    meta.n = j.value("n", std::size_t{0});
    meta.requested_m = j.value("requested_m", meta.m);
    meta.delta = j.value("delta", 1.0);
    meta.alpha = j.value("alpha", 0.0);
    meta.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("lambda_min") && !j["lambda_min"].is_null()) meta.lambda_min = j["lambda_min"].get<double>();
    if (j.contains("lambda_max") && !j["lambda_max"].is_null()) meta.lambda_max = j["lambda_max"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("instance metadata: ") + e.what());
  }
  return meta;
}

void save_instance(const std::filesystem::path& prefix, const ProblemInstance& inst) {
  write_matrix_market(with_suffix(prefix, ".A.mtx"), inst.a);
  write_vector_market(with_suffix(prefix, ".b.mtx"), inst.b);
  if (!inst.x_star.empty()) write_vector_market(with_suffix(prefix, ".xstar.mtx"), inst.x_star);
  const auto meta_path = with_suffix(prefix, ".json");
  std::ofstream out(meta_path);
  if (!out) throw IoError("cannot open " + meta_path.string() + " for writing");
  out << meta_to_json(inst.meta);
}

ProblemInstance load_instance(const std::filesystem::path& prefix) {
  RowMatrix a = read_matrix_market(with_suffix(prefix, ".A.mtx"));
  Vector b = read_vector_market(with_suffix(prefix, ".b.mtx"));
  if (b.size() != a.rows()) throw ShapeMismatch("right-hand side length does not match the matrix rows");
  Vector x_star;
  if (const auto p = with_suffix(prefix, ".xstar.mtx"); std::filesystem::exists(p)) x_star = read_vector_market(p);

  InstanceMeta meta;
  if (const auto p = with_suffix(prefix, ".json"); std::filesystem::exists(p)) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    meta = meta_from_json(ss.str());
  } else {
    meta.generator = "file";
    meta.requested_m = a.rows();
  }
  meta.m = a.rows();
  meta.n = a.cols();
  return {std::move(a), std::move(b), std::move(x_star), std::move(meta)};
}

}  // namespace kaczmarz
