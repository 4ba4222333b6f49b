#pragma once

#include "hazyard/kernels.hpp"

namespace hazyard::kernels::detail {

// Scalar loops starting at index `first`; SIMD variants finish their tails
// with these so the remainder lanes match the reference exactly.
inline double squared_distance(PointsView points, std::size_t i, Point3 p) {
  const double dx = points.xs[i] - p.x;
  const double dy = points.ys[i] - p.y;
  const double dz = points.zs[i] - p.z;
  double acc = dx * dx;
  acc = acc + dy * dy;
  acc = acc + dz * dz;
  return acc;
}

inline std::size_t count_within_tail(PointsView points, Point3 p, double radius_sq,
                                     std::size_t first) {
  std::size_t n = 0;
  for (std::size_t i = first; i < points.size; ++i) {
    n += squared_distance(points, i, p) < radius_sq ? 1 : 0;
  }
  return n;
}

inline void squared_distances_tail(PointsView points, Point3 p, double* out,
                                   std::size_t first) {
  for (std::size_t i = first; i < points.size; ++i) {
    out[i] = squared_distance(points, i, p);
  }
}

#if defined(HAZYARD_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(HAZYARD_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace hazyard::kernels::detail
