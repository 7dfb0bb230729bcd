#pragma once

#include <span>
#include <vector>

#include "core/radial_spectrum.hpp"

namespace lvbif {

struct NodalDiagnostic {
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> zero_locations;
  bool simple = false;
  bool vanishing = false;  // v ≡ 0 up to roundoff: a locked configuration
  int count = 0;
};

struct NodalTolerances {
  double slope = 1e-6;     // |v'| at a root must exceed slope * max|v|
  double endpoint = 1e-8;  // |v| at the first node and at r = 1 must exceed endpoint * max|v|
};

// Sign changes of v located by linear interpolation between nodes.
NodalDiagnostic nodal_count(std::span<const double> v, const RadialGrid& g, const NodalTolerances& tol = {});

// Distance in grid cells between matched root sets; +inf when the counts differ.
double root_distance_cells(const std::vector<double>& a, const std::vector<double>& b, double h);

}  // namespace lvbif
