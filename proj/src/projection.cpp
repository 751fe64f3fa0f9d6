#include "rnc/projection.hpp"

#include <algorithm>
#include <cmath>

#include "rnc/errors.hpp"

namespace rnc {

ProjectionPair make_projections(std::size_t n) {
  if (n == 0) throw PreconditionError("make_projections: n must be at least 1");
  const double nd = static_cast<double>(n);
  ProjectionPair p;
  p.n = n;
  p.v0.assign(n, 1.0 / std::sqrt(nd));
  p.pi = Matrix(n, n, 1.0 / nd);
  p.pi_perp = Matrix::identity(n) - p.pi;
  return p;
}

Vector disagreement(std::span<const double> x) {
  if (x.empty()) return {};
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  Vector out(x.begin(), x.end());
  for (double& v : out) v -= mean;
  return out;
}

Vector disagreement(std::span<const double> x, const ProjectionPair& proj) {
  if (x.size() != proj.n) throw PreconditionError("disagreement: dimension mismatch");
  return disagreement(x);
}

double diameter(std::span<const double> x) {
  if (x.size() <= 1) return 0.0;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

}  // namespace rnc
