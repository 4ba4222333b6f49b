#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string_view>
#include <vector>

#include "doctest.h"
#include "hazyard/kernels.hpp"
#include "hazyard/random.hpp"

using namespace hazyard;
using namespace hazyard::kernels;

namespace {

struct Cloud {
  std::vector<double> xs, ys, zs;
  PointsView view(std::size_t n) const { return {xs.data(), ys.data(), zs.data(), n}; }
};

// Grid-like coordinates: integer multiples of the pitches, as the engine uses.
Cloud grid_cloud(std::size_t n, Rng& rng) {
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.xs.push_back(static_cast<double>(rng.uniform_index(40)) * 4.5);
    c.ys.push_back(static_cast<double>(rng.uniform_index(10)) * 6.5);
    c.zs.push_back(static_cast<double>(rng.uniform_index(4)) * 2.6);
  }
  return c;
}

Cloud noisy_cloud(std::size_t n, Rng& rng) {
  Cloud c;
  auto real = [&] { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * 200.0 - 100.0; };
  for (std::size_t i = 0; i < n; ++i) {
    c.xs.push_back(real());
    c.ys.push_back(real());
    c.zs.push_back(real());
  }
  return c;
}

}  // namespace

TEST_CASE("scalar count_within by hand") {
  const Cloud c{{0.0, 3.0, 6.0}, {0.0, 0.0, 0.0}, {0.0, 4.0, 0.0}};
  const auto& t = scalar_table();
  CHECK(t.count_within(c.view(3), {0, 0, 0}, 25.0) == 1);  // (3,0,4) sits exactly on the radius
  CHECK(t.count_within(c.view(3), {0, 0, 0}, 25.0001) == 2);
  CHECK(t.count_within(c.view(3), {0, 0, 0}, 1e9) == 3);
  CHECK(t.count_within(c.view(0), {0, 0, 0}, 1e9) == 0);

  std::vector<double> out(3);
  t.squared_distances(c.view(3), {0, 0, 0}, out.data());
  CHECK(out == std::vector<double>{0.0, 25.0, 36.0});
}

TEST_CASE("every available ISA matches the scalar kernels bit for bit") {
  Rng rng(11);
  const auto& ref = scalar_table();
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (!isa_available(isa)) continue;
    const KernelTable* t = table_for(isa);
    REQUIRE(t != nullptr);
    CAPTURE(isa_name(isa));
    for (int round = 0; round < 200; ++round) {
      const bool noisy = round % 2 == 1;
      const std::size_t n = rng.uniform_index(67);
      const Cloud c = noisy ? noisy_cloud(n, rng) : grid_cloud(n, rng);
      const Point3 p = noisy ? Point3{1.25, -3.5, 7.0} : Point3{c.xs.empty() ? 0.0 : c.xs[0], 13.0, 2.6};
      for (double r : {0.5, 6.0, 20.0, 48.0}) {
        CHECK(t->count_within(c.view(n), p, r * r) == ref.count_within(c.view(n), p, r * r));
      }
      std::vector<double> a(n), b(n);
      t->squared_distances(c.view(n), p, a.data());
      ref.squared_distances(c.view(n), p, b.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::memcmp(&a[i], &b[i], sizeof(double)) == 0);
    }
  }
}

TEST_CASE("kernels honour the strict boundary in every lane position") {
  // A point exactly on the radius must not count regardless of which SIMD lane
  // or the scalar tail it lands in.
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (!isa_available(isa)) continue;
    const KernelTable* t = table_for(isa);
    for (std::size_t n = 1; n <= 9; ++n) {
      for (std::size_t hit = 0; hit < n; ++hit) {
        Cloud c{std::vector<double>(n, 100.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        c.xs[hit] = 6.0;
        CHECK(t->count_within(c.view(n), {0, 0, 0}, 36.0) == 0);
        CHECK(t->count_within(c.view(n), {0, 0, 0}, 36.000001) == 1);
      }
    }
  }
}

TEST_CASE("dispatch") {
  if (const char* forced = std::getenv("HAZYARD_ISA"); forced && std::string_view(forced) == "scalar") {
    CHECK(active_isa() == Isa::scalar);
  }
  CHECK(isa_available(Isa::scalar));
  CHECK(table_for(Isa::scalar) == &scalar_table());
  const Isa before = active_isa();
  CHECK(isa_available(before));
  CHECK(force_isa(Isa::scalar));
  CHECK(active_isa() == Isa::scalar);
#if defined(__x86_64__)
  CHECK_FALSE(force_isa(Isa::neon));
  CHECK(active_isa() == Isa::scalar);
#endif
  CHECK(force_isa(before));
  CHECK(isa_name(Isa::avx2) == "avx2");
}
