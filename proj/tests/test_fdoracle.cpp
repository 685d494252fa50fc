#include <cmath>

#include "aimspec/errors.hpp"
#include "aimspec/fdoracle.hpp"
#include "aimspec/potentials.hpp"
#include "doctest.h"

using namespace aimspec;
using doctest::Approx;

namespace {

const PotentialSpec kCoulomb = Ptdrsc{1.0, 0.0, 1.0, 1.0, 1.0, 1};

PhysicalContext eps_ctx(double eps) {
  PhysicalContext c;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((FdGrid{1e-6, 1e3, 100}).validate(), ConfigError);
  CHECK_THROWS_AS((FdGrid{0.0, 1e3, 1000}).validate(), ConfigError);
  CHECK_THROWS_AS((FdGrid{1.0, 10.0, 1000}).validate(), ConfigError);
  CHECK_NOTHROW((FdGrid{1e-6, 1e3, 1000}).validate());
  const FdGrid g = default_fd_grid(kCoulomb, PhysicalContext{});
  CHECK(g.r_min == Approx(1e-12));
  CHECK(g.n_points == 10000);
}

TEST_CASE("hydrogen levels") {
  const PhysicalContext ctx;
  const FdGrid g = default_fd_grid(kCoulomb, ctx);
  const auto s = fd_radial_eigenvalues(kCoulomb, ctx, 0.0, 3, g);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Approx(-0.5).epsilon(1e-6));
  CHECK(s[1] == Approx(-0.125).epsilon(1e-6));
  const auto p = fd_radial_eigenvalues(kCoulomb, ctx, 1.0, 1, g);
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p[0] + 0.125) < 1e-6);
}

TEST_CASE("deformed ground state") {
  const PhysicalContext ctx = eps_ctx(0.1);
  const auto s = fd_radial_levels(kCoulomb, ctx, 0.0, 2, default_fd_grid(kCoulomb, ctx));
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0].E + 0.35) < 1e-6);
  CHECK(std::abs(s[1].E + 0.05) < 1e-6);
  CHECK(s[0].tail < 1e-10);
}

TEST_CASE("Sturm node counts") {
  const PhysicalContext ctx = eps_ctx(0.05);
  const auto s = fd_radial_levels(kCoulomb, ctx, 1.0, 3, default_fd_grid(kCoulomb, ctx));
  REQUIRE(s.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(s[k].nodes == k);
}

TEST_CASE("second-order convergence before extrapolation") {
  const PhysicalContext ctx = eps_ctx(0.1);
  FdGrid g = default_fd_grid(kCoulomb, ctx);
  g.n_points = 2000;
  const double e1 = fd_raw_eigenvalues(kCoulomb, ctx, 0.0, 1, g)[0];
  g.n_points = 4001;
  const double e2 = fd_raw_eigenvalues(kCoulomb, ctx, 0.0, 1, g)[0];
  g.n_points = 8003;
  const double e3 = fd_raw_eigenvalues(kCoulomb, ctx, 0.0, 1, g)[0];
  const double ratio = (e1 + 0.35) / (e2 + 0.35);
  CHECK(ratio == Approx(4.0).epsilon(0.05));
  CHECK((e2 + 0.35) / (e3 + 0.35) == Approx(4.0).epsilon(0.05));
}

TEST_CASE("a shallow well holds finitely many levels") {
  // eps = 0.1, l = 2: one level, normalizable under dr/f^2 only (u + v = 0).
  const PhysicalContext ctx = eps_ctx(0.1);
  const auto s = fd_radial_eigenvalues(kCoulomb, ctx, 2.0, 3, default_fd_grid(kCoulomb, ctx));
  REQUIRE(s.size() == 1);
  CHECK(s[0] == Approx(0.04).epsilon(1e-7));
  CHECK(continuum_threshold(kCoulomb, ctx, 0.0) == Approx(0.01125));
  CHECK(continuum_threshold(kCoulomb, ctx, 2.0) == Approx(0.04125));
}

TEST_CASE("Kratzer levels match the implicit route") {
  PhysicalContext ctx = eps_ctx(0.05);
  ctx.delta = 0.2;
  ctx.lambda = 0.1;
  const PotentialSpec k = Kratzer{1.0, 1.0, 0.0, 0.0};
  const auto s = fd_radial_eigenvalues(k, ctx, 0.7, 3, default_fd_grid(k, ctx));
  REQUIRE(s.size() == 3);
  for (int n = 0; n < 3; ++n) CHECK(std::abs(s[n] - radial_closed_energy(k, ctx, n, 0.7)) < 1e-7);
}
