#include "nlgame/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nlgame/errors.hpp"
#include "nlgame/format.hpp"

namespace nlgame::cli {

std::string profile_csv_header(std::size_t dimension) {
  std::string h = "param_value,";
  if (dimension == 1) {
    h += "x,";
  } else {
    for (std::size_t a = 0; a < dimension; ++a) h += "x" + std::to_string(a) + ",";
  }
  return h + "u\n";
}

std::string profile_csv_rows(double param, const GridFunction& w) {
  const Grid& grid = w.grid();
  const std::string p = fmt_double(param);
  std::string out;
  out.reserve(w.size() * 64);
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += p;
    for (double c : grid.node(i)) {
      out += ',';
      out += fmt_double(c);
    }
    out += ',';
    out += fmt_double(w[i]);
    out += '\n';
  }
  return out;
}

std::string histogram_csv_rows(double param, const Histogram& hist) {
  const std::string p = fmt_double(param);
  std::string out;
  for (std::size_t b = 0; b < hist.bin_centers.size(); ++b)
    out += p + "," + fmt_double(hist.bin_centers[b]) + "," + fmt_double(hist.log2_density[b]) + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json to_json(const BandSummary& bands) {
  nlohmann::json j;
  j["count"] = bands.count();
  j["centers"] = bands.centers;
  j["masses"] = bands.masses;
  j["separations"] = bands.separations;
  j["min_separation"] = json_number(bands.min_separation());
  j["gap_threshold"] = bands.gap_threshold;
  return j;
}

}  // namespace nlgame::cli
