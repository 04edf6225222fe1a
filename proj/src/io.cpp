#include "loggas/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace loggas::io {

nlohmann::json config_to_json(const TorusConfiguration& config) {
  nlohmann::json j;
  j["period"] = config.period();
  j["points"] = std::vector<double>(config.points().begin(), config.points().end());
  return j;
}

TorusConfiguration config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("period") || !j.contains("points"))
    throw ParseError("configuration JSON must be {\"period\": N, \"points\": [..]}");
  if (!j["period"].is_number_integer())
    throw ParseError("\"period\" must be an integer");
  if (!j["points"].is_array()) throw ParseError("\"points\" must be an array");
  std::vector<double> pts;
  pts.reserve(j["points"].size());
  for (const auto& v : j["points"]) {
    if (!v.is_number()) throw ParseError("\"points\" entries must be numbers");
    pts.push_back(v.get<double>());
  }
  return TorusConfiguration(std::move(pts), j["period"].get<int>());
}

void save_config(const std::filesystem::path& path, const TorusConfiguration& config) {
  write_text_file(path, config_to_json(config).dump(2) + "\n");
}

TorusConfiguration load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

std::string config_to_csv(const TorusConfiguration& config) {
  std::string out;
  for (double x : config.points()) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FileNotFound("cannot write " + path.string());
  out << text;
}

}  // namespace loggas::io
