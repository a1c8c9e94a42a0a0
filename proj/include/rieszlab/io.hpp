#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rieszlab/core.hpp"

namespace rieszlab {

// 17 significant digits; round-trips any double exactly.
std::string format_double(double v);

nlohmann::json config_to_json(const Configuration& cfg);
Configuration config_from_json(const nlohmann::json& j);

// One configuration JSON object per line.
void write_configs_jsonl(const std::filesystem::path& path,
                         const std::vector<Configuration>& cfgs);
std::vector<Configuration> read_configs_jsonl(const std::filesystem::path& path);

// Flat CSV with a "pos,mult" header.
void write_config_csv(const std::filesystem::path& path, const Configuration& cfg);
Configuration read_config_csv(const std::filesystem::path& path);

// Minimal table writer: header row, then rows of 17-digit numbers.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  static std::string escape(const std::string& s);

 private:
  std::string buffer_;
  std::filesystem::path path_;
  std::size_t ncols_;

 public:
  ~CsvWriter();
};

// Hand-generated polyline SVG: one or more curves over a shared axis frame.
struct SvgCurve {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color = "#1f6fb2";
  std::string label;
};
void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgCurve>& curves,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title);

// Reproducibility record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string version;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
  nlohmann::json parameters;
};
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

std::string iso_timestamp_now();

}  // namespace rieszlab
