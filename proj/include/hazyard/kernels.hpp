#pragma once
// Distance kernels over structure-of-arrays point sets.
//
// Every ISA variant must produce bit-identical results to the scalar
// reference: squared distances are accumulated as ((dx*dx + dy*dy) + dz*dz)
// with separate multiply and add (no fused multiply-add), and comparisons are
// strict (d2 < radius_sq).

#include <cstddef>
#include <span>
#include <string_view>

namespace hazyard::kernels {

enum class Isa { scalar, avx2, neon };

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

// Non-owning view of n points stored as three parallel arrays.
struct PointsView {
  const double* xs = nullptr;
  const double* ys = nullptr;
  const double* zs = nullptr;
  std::size_t size = 0;
};

using CountWithinFn = std::size_t (*)(PointsView points, Point3 p, double radius_sq);
using SquaredDistancesFn = void (*)(PointsView points, Point3 p, double* out);

struct KernelTable {
  Isa isa;
  CountWithinFn count_within;
  SquaredDistancesFn squared_distances;
};

// Per-ISA tables. Only the tables compiled for the current architecture exist;
// table_for() returns nullptr for the others.
const KernelTable& scalar_table();
const KernelTable* table_for(Isa isa);

// True when the ISA was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// The table used by the dispatching entry points below. Chosen once on first
// use: HAZYARD_ISA (scalar|avx2|neon) if set and available, else the widest
// available ISA.
const KernelTable& active();
Isa active_isa();

// Overrides the active table; returns false (and leaves it unchanged) when the
// ISA is not available.
bool force_isa(Isa isa);

std::string_view isa_name(Isa isa);

// Number of points with squared distance to p strictly below radius_sq.
inline std::size_t count_within(PointsView points, Point3 p, double radius_sq) {
  return active().count_within(points, p, radius_sq);
}

// out[i] = squared distance between points[i] and p. out must hold points.size.
inline void squared_distances(PointsView points, Point3 p, std::span<double> out) {
  active().squared_distances(points, p, out.data());
}

}  // namespace hazyard::kernels
