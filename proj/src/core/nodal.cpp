#include "core/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvbif {

NodalDiagnostic nodal_count(std::span<const double> v, const RadialGrid& g, const NodalTolerances& tol) {
  NodalDiagnostic d;
  d.v.assign(v.begin(), v.end());
  const int n = static_cast<int>(v.size());
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (!(m > 1e-300)) {
    d.vanishing = true;
    return d;
  }
  bool ok = std::abs(v[0]) > tol.endpoint * m && std::abs(v[n - 1]) > tol.endpoint * m;
  int last_cell = -3;
  // Walk over nodes with nonzero sign; an exact zero node is absorbed into the bracketing pair.
  int prev = 0;
  for (int i = 1; i < n; ++i) {
    if (v[i] == 0.0) continue;
    if (v[prev] == 0.0) {
      prev = i;
      continue;
    }
    if ((v[prev] > 0.0) != (v[i] > 0.0)) {
      const double t = v[prev] / (v[prev] - v[i]);
      d.zero_locations.push_back(g.r[prev] + t * (g.r[i] - g.r[prev]));
      const double slope = (v[i] - v[prev]) / (g.r[i] - g.r[prev]);
      if (!(std::abs(slope) > tol.slope * m)) ok = false;
      if (prev - last_cell < 2) ok = false;
      if (i - prev > 2) ok = false;
      last_cell = prev;
    }
    prev = i;
  }
  d.count = static_cast<int>(d.zero_locations.size());
  d.simple = ok;
  return d;
}

double root_distance_cells(const std::vector<double>& a, const std::vector<double>& b, double h) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m / h;
}

}  // namespace lvbif
