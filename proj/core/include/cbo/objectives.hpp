#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbo {

using Vec = std::vector<double>;
using EnergyFn = std::function<double(std::span<const double>)>;

/// An objective together with the landscape constants the convergence theory
/// consumes: inverse continuity (eta, nu, r0, e_inf), local Lipschitz growth
/// (l_e, gamma) and the global growth constants c1..c4.
///
/// The constants are metadata. Nothing in the engine reads them; they feed the
/// closed-form bounds in theory.hpp.
struct ObjectiveSpec {
  std::string name;
  std::size_t dim = 0;
  EnergyFn eval;
  std::optional<Vec> minimizer;
  double e_under = 0.0;

  double eta = 1.0;
  double nu = 0.5;
  double r0 = 0.0;
  double e_inf = 0.0;
  double l_e = 1.0;
  double gamma = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;

  /// True when the stored constants are a documented choice rather than
  /// tight values derived for the function.
  bool metadata_is_heuristic = false;

  double operator()(std::span<const double> v) const { return eval(v); }
};

/// Coordinate-wise sum of v_k^2 + 2.5 (1 - cos(2 pi v_k)); global minimum 0 at the origin.
ObjectiveSpec rastrigin(std::size_t dim);

/// ||v - center||_2^2.
ObjectiveSpec quadratic(std::size_t dim, const Vec& center);

/// Resolves the names accepted in config files ("rastrigin", "quadratic").
/// `center` is only consulted for "quadratic"; empty means the origin.
ObjectiveSpec make_objective(const std::string& name, std::size_t dim, const Vec& center = {});

/// E(v) + offset. Same minimizer, shifted infimum.
ObjectiveSpec with_offset(ObjectiveSpec obj, double offset);

/// E(v - shift). Minimizer moves by `shift`.
ObjectiveSpec translated(ObjectiveSpec obj, const Vec& shift);

}  // namespace cbo
