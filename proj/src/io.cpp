#include "rieszlab/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rieszlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json config_to_json(const Configuration& cfg) {
  nlohmann::json j;
  if (cfg.window()) {
    j["window"] = {cfg.window()->left, cfg.window()->right};
  } else {
    j["window"] = nullptr;
  }
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : cfg.atoms()) atoms.push_back({a.pos, a.mult});
  j["atoms"] = std::move(atoms);
  return j;
}

Configuration config_from_json(const nlohmann::json& j) {
  std::optional<Window> w;
  if (j.contains("window") && !j["window"].is_null()) {
    w = Window(j["window"][0].get<double>(), j["window"][1].get<double>());
  }
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({a[0].get<double>(), a[1].get<std::int64_t>()});
  return Configuration(std::move(atoms), w);
}

void write_configs_jsonl(const std::filesystem::path& path,
                         const std::vector<Configuration>& cfgs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (const Configuration& c : cfgs) out << config_to_json(c).dump() << '\n';
}

std::vector<Configuration> read_configs_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::vector<Configuration> cfgs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    cfgs.push_back(config_from_json(nlohmann::json::parse(line)));
  }
  return cfgs;
}

void write_config_csv(const std::filesystem::path& path, const Configuration& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "pos,mult\n";
  for (const Atom& a : cfg.atoms()) out << format_double(a.pos) << ',' << a.mult << '\n';
}

Configuration read_config_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
  std::vector<Atom> atoms;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("bad CSV row: " + line);
    Atom a;
    a.pos = std::strtod(line.substr(0, comma).c_str(), nullptr);
    a.mult = std::strtoll(line.substr(comma + 1).c_str(), nullptr, 10);
    atoms.push_back(a);
  }
  return Configuration(std::move(atoms));
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), ncols_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += escape(columns[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_) throw std::invalid_argument("CsvWriter: column mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != ncols_) throw std::invalid_argument("CsvWriter: column mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += escape(values[i]);
  }
  buffer_ += '\n';
}

std::string CsvWriter::escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_);
  out << buffer_;
}

static std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

static std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgCurve>& curves,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 36, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : curves) {
    for (double x : c.xs) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
    }
    for (double y : c.ys) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymax = ymin + (ymin == 0 ? 1 : std::fabs(ymin) * 0.1);
  }
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\" "
    << "font-family=\"sans-serif\">" << title << "</text>\n";
  // axes
  s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    double fx = xmin + (xmax - xmin) * i / nticks;
    double fy = ymin + (ymax - ymin) * i / nticks;
    s << "<line x1=\"" << svg_num(px(fx)) << "\" y1=\"" << H - mb << "\" x2=\""
      << svg_num(px(fx)) << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << svg_num(px(fx)) << "\" y=\"" << H - mb + 20
      << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
      << tick_label(fx) << "</text>\n";
    s << "<line x1=\"" << ml - 5 << "\" y1=\"" << svg_num(py(fy)) << "\" x2=\"" << ml
      << "\" y2=\"" << svg_num(py(fy)) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << ml - 8 << "\" y=\"" << svg_num(py(fy) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
      << tick_label(fy) << "</text>\n";
  }
  s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
    << "</text>\n";
  s << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
    << "transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\">" << y_label
    << "</text>\n";
  double legend_y = mt + 14;
  for (const auto& c : curves) {
    s << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.xs.size(); ++i) {
      if (i) s << ' ';
      s << svg_num(px(c.xs[i])) << ',' << svg_num(py(c.ys[i]));
    }
    s << "\"/>\n";
    if (!c.label.empty()) {
      s << "<line x1=\"" << W - mr - 130 << "\" y1=\"" << legend_y << "\" x2=\""
        << W - mr - 110 << "\" y2=\"" << legend_y << "\" stroke=\"" << c.color
        << "\" stroke-width=\"2\"/>\n";
      s << "<text x=\"" << W - mr - 104 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << c.label << "</text>\n";
      legend_y += 16;
    }
  }
  s << "</svg>\n";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << s.str();
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "rieszlab";
  j["command"] = m.command;
  j["version"] = m.version;
  j["argv"] = m.argv;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  j["parameters"] = m.parameters;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  RunManifest m;
  m.command = j.value("command", "");
  m.version = j.value("version", "");
  m.argv = j.value("argv", std::vector<std::string>{});
  m.seed = j.value("seed", std::uint64_t{0});
  m.threads = j.value("threads", 1);
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.outputs = j.value("outputs", std::vector<std::string>{});
  if (j.contains("parameters")) m.parameters = j["parameters"];
  return m;
}

std::string iso_timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace rieszlab
