// AArch64 only. NEON is mandatory there, so no runtime probe is needed.
#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace hazyard::kernels {

namespace {

constexpr std::size_t kLanes = 2;

inline float64x2_t squared_distance2(PointsView points, std::size_t i, float64x2_t px,
                                     float64x2_t py, float64x2_t pz) {
  const float64x2_t dx = vsubq_f64(vld1q_f64(points.xs + i), px);
  const float64x2_t dy = vsubq_f64(vld1q_f64(points.ys + i), py);
  const float64x2_t dz = vsubq_f64(vld1q_f64(points.zs + i), pz);
  // vmulq/vaddq rather than vfmaq: the scalar reference rounds after each step.
  float64x2_t acc = vmulq_f64(dx, dx);
  acc = vaddq_f64(acc, vmulq_f64(dy, dy));
  acc = vaddq_f64(acc, vmulq_f64(dz, dz));
  return acc;
}

std::size_t count_within_neon(PointsView points, Point3 p, double radius_sq) {
  const float64x2_t px = vdupq_n_f64(p.x);
  const float64x2_t py = vdupq_n_f64(p.y);
  const float64x2_t pz = vdupq_n_f64(p.z);
  const float64x2_t r2 = vdupq_n_f64(radius_sq);
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + kLanes <= points.size; i += kLanes) {
    const uint64x2_t lt = vcltq_f64(squared_distance2(points, i, px, py, pz), r2);
    // Each true lane is all-ones; shift down to 0/1 and add.
    const uint64x2_t ones = vshrq_n_u64(lt, 63);
    n += static_cast<std::size_t>(vgetq_lane_u64(ones, 0) + vgetq_lane_u64(ones, 1));
  }
  return n + detail::count_within_tail(points, p, radius_sq, i);
}

void squared_distances_neon(PointsView points, Point3 p, double* out) {
  const float64x2_t px = vdupq_n_f64(p.x);
  const float64x2_t py = vdupq_n_f64(p.y);
  const float64x2_t pz = vdupq_n_f64(p.z);
  std::size_t i = 0;
  for (; i + kLanes <= points.size; i += kLanes) {
    vst1q_f64(out + i, squared_distance2(points, i, px, py, pz));
  }
  detail::squared_distances_tail(points, p, out, i);
}

}  // namespace

namespace detail {

const KernelTable& neon_table() {
  static constexpr KernelTable table{Isa::neon, &count_within_neon, &squared_distances_neon};
  return table;
}

}  // namespace detail

}  // namespace hazyard::kernels
