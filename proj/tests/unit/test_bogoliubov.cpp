#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dicke/bogoliubov.hpp"
#include "oracles/oracles.hpp"

using namespace dicke;

namespace {

ModelParams random_params(std::mt19937_64& rng, double g_max) {
  std::uniform_real_distribution<double> freq(0.2, 3.0), g(0.0, g_max);
  ModelParams p;
  p.omega_cav = freq(rng);
  p.omega0_C = freq(rng);
  p.omega0_I = freq(rng);
  p.Omega_C = g(rng);
  p.Omega_I = g(rng);
  return p;
}

void check_against_oracle(const ModelParams& p, double tol) {
  const auto s = excitation_spectrum(p);
  const auto ref = oracle::quadrature_frequencies(
      p.omega_cav, oracle::chain_terms(p.omega_cav, p.omega0_C, p.Omega_C),
      oracle::chain_terms(p.omega_cav, p.omega0_I, p.Omega_I));
  const double scale = std::max(1.0, ref[2]);
  CHECK(std::abs(s.omega_l - ref[0]) < tol * scale);
  CHECK(std::abs(s.omega_m - ref[1]) < tol * scale);
  CHECK(std::abs(s.omega_u - ref[2]) < tol * scale);
}

}  // namespace

TEST_CASE("effective parameters") {
  const auto normal = effective_parameters(resonant(0.3, 0.4));
  CHECK(normal.omega_tilde_C == 1.0);
  CHECK(normal.Omega_tilde_I == 0.4);
  CHECK(normal.D_C == 0.0);
  CHECK(normal.D_I == 0.0);

  const auto sr = effective_parameters(resonant(1.0, 0.0));
  // mu = 1/4
  CHECK(sr.omega_tilde_C == doctest::Approx(2.5));
  CHECK(sr.Omega_tilde_C == doctest::Approx(std::sqrt(2.0) * 0.25 / std::sqrt(1.25)));
  CHECK(sr.D_C == doctest::Approx(3.25 * 0.75 / (2.0 * 1.25)));
}

TEST_CASE("Bogoliubov matrix structure") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto b = build_bogoliubov_matrix(random_params(rng, 2.0));
    CHECK((b.P - b.P.adjoint()).norm() == 0.0);
    CHECK((b.Q - b.Q.transpose()).norm() == 0.0);
    CHECK((b.M.topLeftCorner<3, 3>() - b.P).norm() == 0.0);
    CHECK((b.M.bottomRightCorner<3, 3>() + b.P.transpose()).norm() == 0.0);
    CHECK((b.M.bottomLeftCorner<3, 3>() + b.Q.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("single-chain limits") {
  SUBCASE("normal phase, one chain decoupled") {
    const auto s = excitation_spectrum(resonant(0.3, 0.0));
    const auto ref = oracle::single_chain_normal(1, 1, 0.3);
    CHECK(s.omega_l == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(s.omega_m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.omega_u == doctest::Approx(ref[1]).epsilon(1e-12));
  }
  SUBCASE("superradiant chain C matches the closed-form single-chain branches") {
    for (double g : {0.6, 0.8, 1.0, 1.5}) {
      const auto s = excitation_spectrum(resonant(g, 0.0));
      const auto ref = oracle::single_chain_superradiant(1, 1, g);
      std::array<double, 3> got{s.omega_l, s.omega_m, s.omega_u};
      std::array<double, 3> want{ref[0], ref[1], 1.0};
      std::sort(want.begin(), want.end());
      for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("agreement with the quadrature-form oracle") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 400; ++k) check_against_oracle(random_params(rng, 2.5), 1e-9);
}

TEST_CASE("trace identity tr(M^2) = 2 sum w^2") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto p = random_params(rng, 2.0);
    const auto b = build_bogoliubov_matrix(p);
    const auto s = excitation_spectrum(p);
    const double tr = (b.M * b.M).trace().real();
    const double sum = s.omega_l * s.omega_l + s.omega_m * s.omega_m + s.omega_u * s.omega_u;
    CHECK(tr == doctest::Approx(2.0 * sum).epsilon(1e-10));
  }
}

TEST_CASE("pairing and stability on 10^4 random points") {
  std::mt19937_64 rng(17);
  int unstable = 0;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto p = random_params(rng, 3.0);
    const auto s = excitation_spectrum(p);
    worst = std::max(worst, s.residual / p.omega_cav);
    if (!s.stable) ++unstable;
    CHECK(s.omega_l <= s.omega_m);
    CHECK(s.omega_m <= s.omega_u);
  }
  CHECK(unstable == 0);
  CHECK(worst < 1e-10);
}

TEST_CASE("chain exchange leaves the spectrum invariant") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 200; ++k) {
    const auto p = random_params(rng, 2.0);
    const auto a = excitation_spectrum(p);
    const auto b = excitation_spectrum(swap_chains(p));
    CHECK(a.omega_l == doctest::Approx(b.omega_l).epsilon(1e-9));
    CHECK(a.omega_m == doctest::Approx(b.omega_m).epsilon(1e-9));
    CHECK(a.omega_u == doctest::Approx(b.omega_u).epsilon(1e-9));
  }
}

TEST_CASE("critical lines") {
  SUBCASE("lower branch vanishes exactly on the line") {
    for (double gi : {0.0, 0.2, 0.5, 0.7}) {
      const auto s = excitation_spectrum(resonant(0.5, gi));
      CHECK(s.marginal);
      CHECK(s.stable);
      CHECK(s.omega_l == 0.0);
      CHECK(s.min_abs_eigenvalue < 1e-7);
    }
  }
  SUBCASE("gap closes continuously from both sides") {
    const double below = excitation_spectrum(resonant(0.5 - 1e-4, 0.2)).omega_l;
    const double above = excitation_spectrum(resonant(0.5 + 1e-4, 0.2)).omega_l;
    CHECK(below > 0.0);
    CHECK(above > 0.0);
    CHECK(below < 0.05);
    CHECK(above < 0.05);
  }
}

TEST_CASE("surface sweeps") {
  const auto p0 = resonant(0, 0);
  CHECK(spectrum_surface({}, p0).empty());

  std::vector<CouplingPoint> one{{0.3, 0.2}};
  const auto rows = spectrum_surface(one, p0, 4);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].spectrum.omega_l == excitation_spectrum(resonant(0.3, 0.2)).omega_l);

  std::vector<CouplingPoint> grid;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) grid.push_back({0.1 * i, 0.1 * j});
  grid.push_back({-0.5, 0.1});
  const auto serial = spectrum_surface(grid, p0, 1);
  const auto parallel = spectrum_surface(grid, p0, 3);
  REQUIRE(serial.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(serial[k].Omega_C == grid[k].first);
    CHECK(serial[k].spectrum.omega_u == parallel[k].spectrum.omega_u);
  }
  CHECK_FALSE(serial.back().error.empty());
}

TEST_CASE("ray cuts") {
  const auto p0 = resonant(0, 0);
  SUBCASE("diagonal ray crosses both lines at once") {
    const auto rows = ray_cut({std::numbers::pi / 4, 1.0, 51}, p0);
    CHECK(count_lower_branch_zeros(rows) == 1);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k - 1].r <= rows[k].r);
  }
  SUBCASE("off-diagonal rays cross twice") {
    CHECK(count_lower_branch_zeros(ray_cut({std::numbers::pi / 7, 2.0, 101}, p0)) == 2);
    CHECK(count_lower_branch_zeros(ray_cut({2 * std::numbers::pi / 5, 2.0, 101}, p0)) == 2);
  }
  SUBCASE("crossing samples sit exactly on the critical coupling") {
    const auto rows = ray_cut({std::numbers::pi / 7, 2.0, 11}, p0);
    int exact = 0;
    for (const auto& r : rows)
      if (r.row.Omega_C == 0.5 || r.row.Omega_I == 0.5) ++exact;
    CHECK(exact == 2);
    CHECK(rows.size() == 13);
  }
  SUBCASE("axis ray only meets one line") {
    CHECK(count_lower_branch_zeros(ray_cut({0.0, 2.0, 41}, p0)) == 1);
  }
  SUBCASE("degenerate ranges") {
    CHECK(ray_cut({0.3, 0.0, 11}, p0).empty());
    CHECK(ray_cut({0.3, -1.0, 11}, p0).empty());
  }
}

TEST_CASE("gap closing exponents") {
  // Square-root closing on a single line, linear at the double critical point.
  auto ratio = [](double theta) {
    const double rc = 0.5 / std::max(std::cos(theta), std::sin(theta));
    auto wl = [&](double r) {
      return excitation_spectrum(resonant(r * std::cos(theta), r * std::sin(theta))).omega_l;
    };
    const double d = 1e-5;
    return wl(rc - 2 * d) / wl(rc - d);
  };
  CHECK(ratio(std::numbers::pi / 4) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(ratio(std::numbers::pi / 7) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}
