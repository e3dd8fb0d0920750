#pragma once

/**
 * @file config.hpp
 * @brief Benchmark configuration: per-benchmark defaults, deep-merged with
 *        user-supplied JSON.
 */

#include <json.hpp>
#include <string>

namespace cutmem {

// Built-in defaults; throws for an unknown benchmark name.
nlohmann::json default_config(const std::string& benchmark);

// Recursive merge: object values merge key by key, everything else is
// replaced by the override.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& over);

nlohmann::json load_config_file(const std::string& path);

const std::vector<std::string>& benchmark_names();

} // namespace cutmem
