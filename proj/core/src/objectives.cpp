#include "cbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "cbo/error.hpp"

namespace cbo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::kInvalidDimension, "objective dimension must be positive");
}

}  // namespace

ObjectiveSpec rastrigin(std::size_t dim) {
  require_dim(dim);
  ObjectiveSpec obj;
  obj.name = "rastrigin";
  obj.dim = dim;
  obj.eval = [](std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x + 2.5 * (1.0 - std::cos(2.0 * std::numbers::pi * x));
    return sum;
  };
  obj.minimizer = Vec(dim, 0.0);
  obj.e_under = 0.0;

  // Quadratic minorant E(v) >= ||v||^2 holds on all of R^d.
  obj.eta = 1.0;
  obj.nu = 0.5;
  obj.r0 = kInf;
  obj.e_inf = kInf;

  // Lipschitz constant of one coordinate on [-10, 10] is 2*10 + 5*pi; summed over coordinates.
  obj.l_e = static_cast<double>(dim) * (20.0 + 5.0 * std::numbers::pi);
  obj.gamma = 0.0;

  // |E'(x)| <= (2 + 10 pi^2)|x| per coordinate.
  obj.c1 = 2.0 + 10.0 * std::numbers::pi * std::numbers::pi;
  obj.c2 = 6.0;
  obj.c3 = 1.0;
  obj.c4 = 1.0;
  obj.metadata_is_heuristic = true;
  return obj;
}

ObjectiveSpec quadratic(std::size_t dim, const Vec& center) {
  require_dim(dim);
  if (center.size() != dim) {
    throw Error(ErrorKind::kInvalidDimension, "quadratic center has length " + std::to_string(center.size()) +
                                                  ", expected " + std::to_string(dim));
  }
  ObjectiveSpec obj;
  obj.name = "quadratic";
  obj.dim = dim;
  obj.eval = [center](std::span<const double> v) {
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double diff = v[k] - center[k];
      sum += diff * diff;
    }
    return sum;
  };
  obj.minimizer = center;
  obj.e_under = 0.0;
  obj.eta = 1.0;
  obj.nu = 0.5;
  obj.r0 = kInf;
  obj.e_inf = kInf;
  obj.l_e = 1.0;
  obj.gamma = 1.0;

  double center_norm_sq = 0.0;
  for (double c : center) center_norm_sq += c * c;
  obj.c1 = 1.0 + std::sqrt(center_norm_sq);
  obj.c2 = std::max(2.0, 2.0 * center_norm_sq);
  obj.c3 = 0.25;
  obj.c4 = std::max(1.0, 2.0 * std::sqrt(center_norm_sq));
  return obj;
}

ObjectiveSpec make_objective(const std::string& name, std::size_t dim, const Vec& center) {
  if (name == "rastrigin") return rastrigin(dim);
  if (name == "quadratic") return quadratic(dim, center.empty() ? Vec(dim, 0.0) : center);
  throw Error(ErrorKind::kInvalidConfig, "unknown objective '" + name + "'");
}

ObjectiveSpec with_offset(ObjectiveSpec obj, double offset) {
  obj.eval = [inner = std::move(obj.eval), offset](std::span<const double> v) { return inner(v) + offset; };
  obj.e_under += offset;
  obj.name += "+offset";
  return obj;
}

ObjectiveSpec translated(ObjectiveSpec obj, const Vec& shift) {
  if (shift.size() != obj.dim) throw Error(ErrorKind::kInvalidDimension, "shift length does not match objective");
  obj.eval = [inner = std::move(obj.eval), shift](std::span<const double> v) {
    Vec moved(v.begin(), v.end());
    for (std::size_t k = 0; k < moved.size(); ++k) moved[k] -= shift[k];
    return inner(moved);
  };
  if (obj.minimizer) {
    for (std::size_t k = 0; k < shift.size(); ++k) (*obj.minimizer)[k] += shift[k];
  }
  obj.name += "+shift";
  return obj;
}

}  // namespace cbo
