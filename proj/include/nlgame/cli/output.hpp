#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nlgame/analysis.hpp"
#include "nlgame/core.hpp"

namespace nlgame::cli {

/// Long-format profile: `param_value,x,u` (1-D) or `param_value,x0,x1,...,u`.
std::string profile_csv_header(std::size_t dimension);
std::string profile_csv_rows(double param, const GridFunction& w);

inline std::string histogram_csv_header() { return "param_value,bin_center,log2_density\n"; }
std::string histogram_csv_rows(double param, const Histogram& hist);

/// Writes bytes verbatim (LF stays LF). Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
std::string read_text(const std::filesystem::path& path);

/// JSON number, with non-finite values stored as null.
nlohmann::json json_number(double v);

nlohmann::json to_json(const BandSummary& bands);

}  // namespace nlgame::cli
