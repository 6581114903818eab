#pragma once

#include <filesystem>
#include <string>

#include "kaczmarz/problem_gen.hpp"

namespace kaczmarz {

// An instance on disk is <prefix>.A.mtx, <prefix>.b.mtx, <prefix>.xstar.mtx
// and a <prefix>.json metadata sidecar.

std::string meta_to_json(const InstanceMeta& meta);
InstanceMeta meta_from_json(const std::string& text);

void save_instance(const std::filesystem::path& prefix, const ProblemInstance& inst);

/// The x* file and the sidecar are optional; when absent x* is left empty and
/// the metadata is filled from the matrix shape.
ProblemInstance load_instance(const std::filesystem::path& prefix);

}  // namespace kaczmarz
