#include "cbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbo/error.hpp"

namespace cbo {

namespace {

double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double norm_sq(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

void require_dims(const Ensemble& ens, std::span<const double> vstar) {
  if (vstar.size() != ens.dim()) throw Error(ErrorKind::kInvalidDimension, "v* does not match ensemble dimension");
}

}  // namespace

double v_functional(const Ensemble& ens, std::span<const double> vstar) {
  require_dims(ens, vstar);
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) s += dist_sq(ens[i], vstar);
  return s / (2.0 * static_cast<double>(ens.size()));
}

double variance(const Ensemble& ens) {
  const Vec m = ens.mean();
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) s += dist_sq(ens[i], m);
  return s / (2.0 * static_cast<double>(ens.size()));
}

double ball_mass(const Ensemble& ens, std::span<const double> vstar, double r) {
  require_dims(ens, vstar);
  const double r_sq = r * r;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    // closed ball
    if (dist_sq(ens[i], vstar) <= r_sq) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(ens.size());
}

double moment4_stat(const Ensemble& ens, const Ensemble* ens_bar) {
  if (ens_bar != nullptr && (ens_bar->size() != ens.size() || ens_bar->dim() != ens.dim())) {
    throw Error(ErrorKind::kInvalidInput, "moment4_stat: ensembles differ in size or dimension");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double a = norm_sq(ens[i]);
    double m = a * a;
    if (ens_bar != nullptr) {
      const double b = norm_sq((*ens_bar)[i]);
      m = std::max(m, b * b);
    }
    s += m;
  }
  return s / static_cast<double>(ens.size());
}

double first_moment(const Ensemble& ens, std::span<const double> vstar) {
  require_dims(ens, vstar);
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) s += std::sqrt(dist_sq(ens[i], vstar));
  return s / static_cast<double>(ens.size());
}

MetricsRecord make_record(const Ensemble& ens, std::span<const double> vstar, std::span<const double> consensus,
                          const std::vector<double>& ball_radii) {
  MetricsRecord rec;
  rec.t = ens.time();
  rec.variance = variance(ens);
  rec.moment4 = moment4_stat(ens);
  if (vstar.empty()) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    rec.v_func = rec.w2_sq = rec.consensus_dist = nan;
    for (double r : ball_radii) rec.ball_mass.emplace_back(r, nan);
    return rec;
  }
  rec.v_func = v_functional(ens, vstar);
  rec.w2_sq = 2.0 * rec.v_func;
  rec.consensus_dist = std::sqrt(dist_sq(consensus, vstar));
  for (double r : ball_radii) rec.ball_mass.emplace_back(r, ball_mass(ens, vstar, r));
  return rec;
}

double fit_decay_rate(std::span<const std::pair<double, double>> series, TimeWindow window) {
  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  std::size_t count = 0;
  for (const auto& [t, y] : series) {
    if (t < window.begin || t > window.end) continue;
    if (!(y > 0.0)) throw Error(ErrorKind::kInvalidInput, "fit_decay_rate: nonpositive value in window");
    const double ly = -std::log(y);
    sum_t += t;
    sum_y += ly;
    sum_tt += t * t;
    sum_ty += t * ly;
    ++count;
  }
  if (count < 3) throw Error(ErrorKind::kInvalidInput, "fit_decay_rate: fewer than 3 points in window");
  const double n = static_cast<double>(count);
  const double denom = n * sum_tt - sum_t * sum_t;
  if (denom == 0.0) throw Error(ErrorKind::kInvalidInput, "fit_decay_rate: degenerate time window");
  return (n * sum_ty - sum_t * sum_y) / denom;
}

TimeWindow default_fit_window(const MetricsSeries& series) {
  const auto& recs = series.records;
  if (recs.empty()) throw Error(ErrorKind::kInvalidInput, "empty series");
  const double floor = 1e-6 * recs.front().v_func;
  const std::size_t tail_cut = recs.size() - recs.size() / 10;  // records [tail_cut, end) are the last 10%
  std::size_t last = 0;
  for (std::size_t k = 0; k < tail_cut; ++k) {
    if (recs[k].v_func < floor) break;
    last = k;
  }
  return {recs.front().t, recs[last].t};
}

double fit_v_decay_rate(const MetricsSeries& series) {
  std::vector<std::pair<double, double>> points;
  points.reserve(series.records.size());
  for (const auto& r : series.records) points.emplace_back(r.t, r.v_func);
  return fit_decay_rate(points, default_fit_window(series));
}

}  // namespace cbo
