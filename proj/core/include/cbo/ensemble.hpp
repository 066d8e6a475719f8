#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "cbo/objectives.hpp"

namespace cbo {

/// N particle positions in R^d at one time instant, stored row-major.
/// Row i is particle i; the ensemble is the empirical measure of its rows.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::size_t n, std::size_t dim, double time = 0.0);
  Ensemble(std::vector<Vec> rows, double time = 0.0);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  std::span<double> operator[](std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> operator[](std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Vec mean() const;
  bool all_finite() const noexcept;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  double time_ = 0.0;
  std::vector<double> data_;
};

/// N(mean, variance * I).
struct GaussianIsotropic {
  Vec mean;
  double variance = 1.0;
};

/// Uniform on the box [lo, hi].
struct UniformBox {
  Vec lo;
  Vec hi;
};

using InitDistribution = std::variant<GaussianIsotropic, UniformBox>;

/// Throws kInvalidConfig unless the distribution is well formed in dimension `dim`.
void validate(const InitDistribution& dist, std::size_t dim);

/// N i.i.d. draws; particle i uses its own substream, so the first n rows of a
/// larger sample with the same seed coincide with a smaller one.
Ensemble sample_initial(const InitDistribution& dist, std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace cbo
