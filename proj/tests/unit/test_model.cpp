#include "doctest.h"

#include <random>

#include <nlohmann/json.hpp>

#include "dicke/model.hpp"

using namespace dicke;

TEST_CASE("critical couplings") {
  SUBCASE("resonance") {
    const auto cr = critical_couplings(resonant(0, 0));
    CHECK(cr.C == 0.5);
    CHECK(cr.I == 0.5);
  }
  SUBCASE("detuned cavity") {
    ModelParams p;
    p.omega_cav = 4.0;
    CHECK(critical_couplings(p).C == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("zero transition frequency is rejected") {
    ModelParams p;
    p.omega0_C = 0.0;
    CHECK_THROWS_AS(critical_couplings(p), std::invalid_argument);
  }
  SUBCASE("scaling every frequency by s scales the critical coupling by s") {
    ModelParams p;
    p.omega_cav = 1.7;
    p.omega0_C = 0.6;
    p.omega0_I = 2.3;
    ModelParams q = p;
    const double s = 3.0;
    q.omega_cav *= s;
    q.omega0_C *= s;
    q.omega0_I *= s;
    CHECK(critical_couplings(q).C == doctest::Approx(s * critical_couplings(p).C));
    CHECK(critical_couplings(q).I == doctest::Approx(s * critical_couplings(p).I));
    // Scaling only the cavity by s^2 scales it by s as well.
    ModelParams r = p;
    r.omega_cav *= s * s;
    CHECK(critical_couplings(r).C == doctest::Approx(s * critical_couplings(p).C));
  }
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  auto bad = [](auto mutate) {
    ModelParams q;
    mutate(q);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  };
  bad([](ModelParams& q) { q.omega_cav = -1; });
  bad([](ModelParams& q) { q.omega0_I = 0; });
  bad([](ModelParams& q) { q.Omega_C = -0.1; });
  bad([](ModelParams& q) { q.N_I = 0; });
  bad([](ModelParams& q) { q.Omega_I = NAN; });
}

TEST_CASE("mu_tilde") {
  CHECK(mu_tilde(resonant(1.0, 0)).C == 0.25);
  CHECK(mu_tilde(resonant(0.3, 0)).C == 1.0);
  // At the critical line both branch formulas give 1.
  const auto p = resonant(0.5, 0.5);
  CHECK(mu_tilde(p).C == 1.0);
  CHECK(p.omega0_C * p.omega_cav / (4 * p.Omega_C * p.Omega_C) == 1.0);

  SUBCASE("continuous, non-increasing, in (0, 1]") {
    double prev = 1.0;
    for (int k = 0; k <= 400; ++k) {
      const double g = 0.005 * k;
      const double mu = mu_tilde(resonant(g, 0)).C;
      CHECK(mu > 0.0);
      CHECK(mu <= 1.0);
      CHECK(mu <= prev);
      CHECK(prev - mu < 0.03);
      prev = mu;
    }
    CHECK(mu_tilde(resonant(0.5 + 1e-12, 0)).C == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("classify_phase") {
  CHECK(classify_phase(resonant(0.3, 0.2)).tag == PhaseTag::Normal);
  CHECK(classify_phase(resonant(0.7, 0.2)).tag == PhaseTag::SuperradiantC);
  CHECK(classify_phase(resonant(0.2, 0.6)).tag == PhaseTag::SuperradiantI);
  CHECK(classify_phase(resonant(0.7, 0.8)).tag == PhaseTag::DoublySuperradiant);

  SUBCASE("exactly critical classifies sub-critical and flags the boundary") {
    const auto ph = classify_phase(resonant(0.5, 0.8));
    CHECK(ph.tag == PhaseTag::SuperradiantI);
    CHECK(ph.on_boundary_C);
    CHECK_FALSE(ph.on_boundary_I);
  }
  SUBCASE("boundary tolerance is relative") {
    CHECK(classify_phase(resonant(0.5 * (1 + 1e-10), 0)).on_boundary_C);
    CHECK_FALSE(classify_phase(resonant(0.5 * (1 + 1e-8), 0)).on_boundary_C);
    CHECK(classify_phase(resonant(0.5 * (1 + 1e-8), 0), 1e-7).on_boundary_C);
    CHECK_THROWS(classify_phase(resonant(0, 0), -1.0));
  }
  SUBCASE("chain exchange swaps the C/I tags") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int k = 0; k < 500; ++k) {
      ModelParams p;
      p.omega_cav = u(rng);
      p.omega0_C = u(rng);
      p.omega0_I = u(rng);
      p.Omega_C = u(rng);
      p.Omega_I = u(rng);
      p.N_C = 1 + k % 5;
      p.N_I = 1 + k % 3;
      const auto a = classify_phase(p);
      const auto b = classify_phase(swap_chains(p));
      CHECK(a.superradiant_C() == b.superradiant_I());
      CHECK(a.superradiant_I() == b.superradiant_C());
      CHECK(a.on_boundary_C == b.on_boundary_I);
    }
  }
}

TEST_CASE("ModelParams JSON") {
  ModelParams p;
  p.omega_cav = 1.25;
  p.omega0_C = 0.5;
  p.omega0_I = 2.0;
  p.Omega_C = 0.75;
  p.Omega_I = 0.1;
  p.N_C = 8;
  p.N_I = 3;
  const nlohmann::json j = p;
  CHECK(j.size() == 7);
  for (auto key : {"omega_cav", "omega0_C", "omega0_I", "Omega_C", "Omega_I", "N_C", "N_I"})
    CHECK(j.contains(key));
  CHECK(j.get<ModelParams>() == p);

  auto broken = j;
  broken["extra"] = 1;
  CHECK_THROWS_AS(broken.get<ModelParams>(), std::invalid_argument);
  broken = j;
  broken.erase("N_I");
  CHECK_THROWS_AS(broken.get<ModelParams>(), std::invalid_argument);
  broken = j;
  broken["N_C"] = 2.5;
  CHECK_THROWS_AS(broken.get<ModelParams>(), std::invalid_argument);
  broken = j;
  broken["omega_cav"] = 0.0;
  CHECK_THROWS_AS(broken.get<ModelParams>(), std::invalid_argument);
}
