#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vortex/experiments.hpp"

namespace vortex {

// Writes results.csv (when there are trial rows), summary.json, every table,
// curve and IMI matrix of the result into dir. Every CSV starts with a
// "# spec_hash=<hash>" line followed by a column header. Returns the paths
// written, in write order.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const ExperimentSpec& spec,
                                                 const std::filesystem::path& dir);

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
                   const std::string& spec_hash);

} // namespace vortex
