#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cbo::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::runtime_error("not a number: '" + s + "'");
  return x;
}

std::string metrics_header(const std::vector<double>& ball_radii) {
  std::string h = "t,v_func,variance,w2_sq,consensus_dist";
  for (double r : ball_radii) h += ",ball_mass_" + format_double(r);
  return h + ",moment4";
}

void write_metrics_csv(std::ostream& out, const MetricsSeries& series, const std::vector<double>& ball_radii) {
  out << metrics_header(ball_radii) << '\n';
  for (const auto& r : series.records) {
    out << format_double(r.t) << ',' << format_double(r.v_func) << ',' << format_double(r.variance) << ','
        << format_double(r.w2_sq) << ',' << format_double(r.consensus_dist);
    for (const auto& [radius, frac] : r.ball_mass) out << ',' << format_double(frac);
    out << ',' << format_double(r.moment4) << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::vector<MetricsRecord> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("metrics csv: missing header");
  const auto header = split(line);
  if (header.size() < 6 || header.front() != "t" || header.back() != "moment4") {
    throw std::runtime_error("metrics csv: unexpected header");
  }
  std::vector<double> radii;
  for (std::size_t k = 5; k + 1 < header.size(); ++k) {
    const std::string prefix = "ball_mass_";
    if (header[k].rfind(prefix, 0) != 0) throw std::runtime_error("metrics csv: bad column '" + header[k] + "'");
    radii.push_back(parse_double(header[k].substr(prefix.size())));
  }

  std::vector<MetricsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw std::runtime_error("metrics csv: wrong field count");
    MetricsRecord r;
    r.t = parse_double(f[0]);
    r.v_func = parse_double(f[1]);
    r.variance = parse_double(f[2]);
    r.w2_sq = parse_double(f[3]);
    r.consensus_dist = parse_double(f[4]);
    for (std::size_t k = 0; k < radii.size(); ++k) r.ball_mass.emplace_back(radii[k], parse_double(f[5 + k]));
    r.moment4 = parse_double(f.back());
    records.push_back(std::move(r));
  }
  return records;
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cbo::cli
