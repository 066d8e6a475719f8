#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "cbo/ensemble.hpp"

namespace cbo::test {

inline Ensemble ensemble_1d(std::initializer_list<double> xs) {
  std::vector<Vec> rows;
  for (double x : xs) rows.push_back({x});
  return Ensemble(std::move(rows));
}

inline Ensemble random_ensemble(std::mt19937_64& rng, std::size_t n, std::size_t d, double spread = 3.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Ensemble ens(n, d);
  for (auto& x : ens.data()) x = u(rng);
  return ens;
}

}  // namespace cbo::test
