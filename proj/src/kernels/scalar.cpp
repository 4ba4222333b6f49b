#include "kernels_internal.hpp"

namespace hazyard::kernels {

namespace {

std::size_t count_within_scalar(PointsView points, Point3 p, double radius_sq) {
  return detail::count_within_tail(points, p, radius_sq, 0);
}

void squared_distances_scalar(PointsView points, Point3 p, double* out) {
  detail::squared_distances_tail(points, p, out, 0);
}

}  // namespace

const KernelTable& scalar_table() {
  static constexpr KernelTable table{Isa::scalar, &count_within_scalar, &squared_distances_scalar};
  return table;
}

}  // namespace hazyard::kernels
