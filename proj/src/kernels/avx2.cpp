// Compiled with -mavx2 only; reached through dispatch after a CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace hazyard::kernels {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d squared_distance4(PointsView points, std::size_t i, __m256d px, __m256d py,
                                 __m256d pz) {
  const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(points.xs + i), px);
  const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(points.ys + i), py);
  const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(points.zs + i), pz);
  __m256d acc = _mm256_mul_pd(dx, dx);
  acc = _mm256_add_pd(acc, _mm256_mul_pd(dy, dy));
  acc = _mm256_add_pd(acc, _mm256_mul_pd(dz, dz));
  return acc;
}

std::size_t count_within_avx2(PointsView points, Point3 p, double radius_sq) {
  const __m256d px = _mm256_set1_pd(p.x);
  const __m256d py = _mm256_set1_pd(p.y);
  const __m256d pz = _mm256_set1_pd(p.z);
  const __m256d r2 = _mm256_set1_pd(radius_sq);
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + kLanes <= points.size; i += kLanes) {
    const __m256d d2 = squared_distance4(points, i, px, py, pz);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LT_OQ));
    n += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return n + detail::count_within_tail(points, p, radius_sq, i);
}

void squared_distances_avx2(PointsView points, Point3 p, double* out) {
  const __m256d px = _mm256_set1_pd(p.x);
  const __m256d py = _mm256_set1_pd(p.y);
  const __m256d pz = _mm256_set1_pd(p.z);
  std::size_t i = 0;
  for (; i + kLanes <= points.size; i += kLanes) {
    _mm256_storeu_pd(out + i, squared_distance4(points, i, px, py, pz));
  }
  detail::squared_distances_tail(points, p, out, i);
}

}  // namespace

namespace detail {

const KernelTable& avx2_table() {
  static constexpr KernelTable table{Isa::avx2, &count_within_avx2, &squared_distances_avx2};
  return table;
}

}  // namespace detail

}  // namespace hazyard::kernels
