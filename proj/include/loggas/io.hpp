#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "loggas/torus_config.hpp"

namespace loggas::io {

// Configuration file format: {"period": N, "points": [..]}. Serialized
// doubles round-trip bit-exactly (shortest-representation output, 17
// significant digits at most).
nlohmann::json config_to_json(const TorusConfiguration& config);
TorusConfiguration config_from_json(const nlohmann::json& j);  // ParseError

void save_config(const std::filesystem::path& path, const TorusConfiguration& config);
TorusConfiguration load_config(const std::filesystem::path& path);  // FileNotFound

// CSV export: one point per line, 17 significant digits.
std::string config_to_csv(const TorusConfiguration& config);

std::string format_double(double x);  // %.17g

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace loggas::io
