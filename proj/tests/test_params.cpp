#include <cmath>
#include <stdexcept>

#include "cubicrx/params.hpp"
#include "doctest.h"

using namespace cubicrx;

TEST_CASE("responsivity and ASE variance at the reference point") {
  const SystemParams sp;
  const DerivedParams dp = derive(sp);
  // Independent evaluation in long double from the raw constants.
  const long double h = 6.62607015e-34L, q = 1.602176634e-19L, c = 2.99792458e8L;
  const long double nu = c / 1.55e-6L;
  const long double r = 0.8L * q / (h * nu);
  const long double delta = 1.1L * (1e5L - 1.0L) * h * nu;
  const long double s2 = delta * 1.0L / (2.0L * 100e-15L);
  CHECK(dp.responsivity == doctest::Approx(static_cast<double>(r)).epsilon(1e-14));
  CHECK(dp.sigma0_sq == doctest::Approx(static_cast<double>(s2)).epsilon(1e-14));
  CHECK(dp.responsivity == doctest::Approx(1.0001).epsilon(1e-4));
  CHECK(dp.sigma0_sq == doctest::Approx(0.0705).epsilon(1e-3));
  CHECK(dp.nu == doctest::Approx(static_cast<double>(nu)).epsilon(1e-15));
  CHECK(dp.delta == doctest::Approx(static_cast<double>(delta)).epsilon(1e-14));
}

TEST_CASE("response time is PRD times the pulse duration") {
  SystemParams sp;
  sp.prd = 50;
  sp.tau_c = 100e-15;
  CHECK(derive(sp).t_p == doctest::Approx(5e-12).epsilon(1e-15));
  sp.prd = 7;
  CHECK(derive(sp).t_p == sp.prd * sp.tau_c);
}

TEST_CASE("dBm conversions") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watts(35.0) == doctest::Approx(3.16227766).epsilon(1e-8));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  for (double dbm : {-40.0, -3.3, 0.0, 17.0, 35.0, 60.0})
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  for (double w : {1e-9, 0.37, 1.0, 3.0, 1e4}) CHECK(dbm_to_watts(watts_to_dbm(w)) == doctest::Approx(w).epsilon(1e-12));
  CHECK_THROWS_AS(watts_to_dbm(0.0), std::domain_error);
  CHECK_THROWS_AS(watts_to_dbm(-1.0), std::domain_error);
}

TEST_CASE("invalid parameters are rejected") {
  auto bad = [](auto mutate) {
    SystemParams sp;
    mutate(sp);
    CHECK_THROWS_AS(derive(sp), std::domain_error);
  };
  bad([](SystemParams& s) { s.tau_c = 0; });
  bad([](SystemParams& s) { s.prd = 0.5; });
  bad([](SystemParams& s) { s.g_amp = 0.9; });
  bad([](SystemParams& s) { s.eta = 0; });
  bad([](SystemParams& s) { s.eta = 1.2; });
  bad([](SystemParams& s) { s.l1 = 0; });
  bad([](SystemParams& s) { s.l2 = 1.5; });
  bad([](SystemParams& s) { s.p_r = -1; });
  bad([](SystemParams& s) { s.k = 0; });
  bad([](SystemParams& s) { s.gamma_nl = -0.1; });
  SystemParams edge;
  edge.prd = 1;
  edge.g_amp = 1;
  edge.eta = 1;
  edge.p_r = 0;
  CHECK_NOTHROW(derive(edge));
  CHECK(derive(edge).sigma0_sq == 0.0);
}

TEST_CASE("derive is deterministic and linear in L2 and G_amp - 1") {
  SystemParams sp;
  const DerivedParams a = derive(sp);
  const DerivedParams b = derive(sp);
  CHECK(a.sigma0_sq == b.sigma0_sq);
  CHECK(a.responsivity == b.responsivity);

  sp.l2 = 0.5;
  const double half = derive(sp).sigma0_sq;
  sp.l2 = 1.0;
  CHECK(derive(sp).sigma0_sq == doctest::Approx(2.0 * half).epsilon(1e-15));

  sp.g_amp = 1001.0;
  const double g1 = derive(sp).sigma0_sq;
  sp.g_amp = 2001.0;
  CHECK(derive(sp).sigma0_sq == doctest::Approx(2.0 * g1).epsilon(1e-15));
}

TEST_CASE("L1 does not enter any derived quantity") {
  SystemParams sp;
  const DerivedParams a = derive(sp);
  sp.l1 = 0.25;
  const DerivedParams b = derive(sp);
  CHECK(a.sigma0_sq == b.sigma0_sq);
  CHECK(a.responsivity == b.responsivity);
}
