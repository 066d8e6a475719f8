#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cbo/metrics.hpp"

namespace cbo::cli {

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);
double parse_double(const std::string& s);

/// Header `t,v_func,variance,w2_sq,consensus_dist,ball_mass_<r>...,moment4`.
std::string metrics_header(const std::vector<double>& ball_radii);
void write_metrics_csv(std::ostream& out, const MetricsSeries& series, const std::vector<double>& ball_radii);

/// Inverse of write_metrics_csv for the records; throws std::runtime_error on malformed input.
std::vector<MetricsRecord> read_metrics_csv(std::istream& in);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_key_values(std::ostream& out, const KeyValues& kv);
KeyValues read_key_values(std::istream& in);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

}  // namespace cbo::cli
