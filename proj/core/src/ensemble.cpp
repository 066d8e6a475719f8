#include "cbo/ensemble.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cbo/error.hpp"
#include "cbo/rng.hpp"

namespace cbo {

Ensemble::Ensemble(std::size_t n, std::size_t dim, double time) : n_(n), dim_(dim), time_(time), data_(n * dim, 0.0) {}

Ensemble::Ensemble(std::vector<Vec> rows, double time) : n_(rows.size()), dim_(0), time_(time) {
  if (!rows.empty()) dim_ = rows.front().size();
  data_.reserve(n_ * dim_);
  for (const Vec& row : rows) {
    if (row.size() != dim_) throw Error(ErrorKind::kInvalidDimension, "ragged ensemble rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Vec Ensemble::mean() const {
  Vec m(dim_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto row = (*this)[i];
    for (std::size_t k = 0; k < dim_; ++k) m[k] += row[k];
  }
  for (double& x : m) x /= static_cast<double>(n_);
  return m;
}

bool Ensemble::all_finite() const noexcept {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void validate(const InitDistribution& dist, std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::kInvalidConfig, "dimension must be positive");
  if (const auto* g = std::get_if<GaussianIsotropic>(&dist)) {
    if (g->mean.size() != dim) {
      throw Error(ErrorKind::kInvalidConfig, "gaussian mean has length " + std::to_string(g->mean.size()) +
                                                 ", expected " + std::to_string(dim));
    }
    if (!(g->variance > 0.0) || !std::isfinite(g->variance)) {
      throw Error(ErrorKind::kInvalidConfig, "gaussian variance must be positive and finite");
    }
    return;
  }
  const auto& box = std::get<UniformBox>(dist);
  if (box.lo.size() != dim || box.hi.size() != dim) {
    throw Error(ErrorKind::kInvalidConfig, "uniform box bounds do not match dimension " + std::to_string(dim));
  }
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(box.lo[k] < box.hi[k]) || !std::isfinite(box.lo[k]) || !std::isfinite(box.hi[k])) {
      throw Error(ErrorKind::kInvalidConfig, "uniform box requires lo < hi in coordinate " + std::to_string(k));
    }
  }
}

Ensemble sample_initial(const InitDistribution& dist, std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kInvalidConfig, "particle count must be positive");
  validate(dist, dim);
  Ensemble ens(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    Substream stream(seed, i, kInitStream);
    auto row = ens[i];
    if (const auto* g = std::get_if<GaussianIsotropic>(&dist)) {
      std::normal_distribution<double> normal(0.0, std::sqrt(g->variance));
      for (std::size_t k = 0; k < dim; ++k) row[k] = g->mean[k] + normal(stream);
    } else {
      const auto& box = std::get<UniformBox>(dist);
      for (std::size_t k = 0; k < dim; ++k) {
        std::uniform_real_distribution<double> uniform(box.lo[k], box.hi[k]);
        row[k] = uniform(stream);
      }
    }
  }
  return ens;
}

}  // namespace cbo
