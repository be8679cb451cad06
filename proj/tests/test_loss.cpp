#include <doctest.h>

#include <cmath>

#include "noonsim/husimi.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/loss.hpp"

using namespace noonsim;

namespace {

const ModeParams kRef{cplx(1.0, 0.0), cplx(0.0, 2.68), 0.9, 3};

}  // namespace

TEST_CASE("transmission loss limits: tau'=1 passes, tau'=0 empties") {
  const auto s = psi_m_state(kRef).state;
  const auto full = transmission_loss(s, 1.0);
  REQUIRE(full.branches.size() == 1);
  CHECK(full.branches[0].weight == 1.0);
  CHECK(full.branches[0].state.amps == s.amps);

  const auto none = transmission_loss(s, 0.0);
  REQUIRE(none.branches.size() == 1);
  CHECK(none.branches[0].state.dim == 1);
  CHECK(std::abs(none.branches[0].state.amps[0] - cplx(1, 0)) == 0.0);

  CHECK_THROWS_AS(transmission_loss(s, 1.0001), std::invalid_argument);
}

TEST_CASE("loss branch weights sum to one and scale the mean linearly") {
  ModeParams p{cplx(0.8, 0.0), cplx(0.0, 1.4), 0.9, 1};
  const auto s = psi_m_state(p).state;
  const double mean0 = mean_photon(s);
  for (double tp : {0.3, 0.6, 0.85}) {
    const auto e = transmission_loss(s, tp);
    CHECK(e.total_weight() + e.pruned_weight ==
          doctest::Approx(1.0).epsilon(1e-9));
    // loss is a binomial thinning of each branch: mean scales exactly up to
    // the pruned near-vacuum branches
    CHECK(ensemble_mean_photon(e) == doctest::Approx(tp * mean0).epsilon(1e-8));
  }
}

TEST_CASE("commuting the loss through the final mixer changes nothing") {
  ModeParams p{cplx(0.7, 0.0), cplx(0.0, 1.1), 0.85, 2};
  const double tp = 0.75;
  const auto direct = transmission_loss(psi_m_state(p).state, tp);
  const auto commuted = transmission_loss_commuted(p, tp);
  CHECK(commuted.branches.size() < direct.branches.size());

  // the two ensembles are different mixtures of the same channel output;
  // compare them where mixtures are comparable, on the Q function
  for (const PhasePoint& pp :
       {PhasePoint{{0.2, 0.4}, {-0.5, 0.9}}, PhasePoint{{1.0, 0.0}, {0.0, 1.3}},
        PhasePoint{{-0.8, -0.3}, {0.4, 0.2}}}) {
    CHECK(std::abs(q_two_mode(direct, pp) - q_two_mode(commuted, pp)) < 1e-10);
  }
  // and on the joint photon distribution mean
  CHECK(ensemble_mean_photon(direct) ==
        doctest::Approx(ensemble_mean_photon(commuted)).epsilon(1e-9));
}

TEST_CASE("lossy Q from branches equals the smeared-Q integral at small dim") {
  ModeParams p{cplx(0.4, 0.0), cplx(0.0, 0.6), 0.7, 1};
  const auto small = truncate_to(psi_m_state(p).state, 12);
  const double tp = 0.7;
  const auto ens = transmission_loss(small, tp);
  for (const PhasePoint& pp :
       {PhasePoint{{0.3, -0.2}, {0.1, 0.5}}, PhasePoint{{-0.6, 0.4}, {0.7, 0.0}}}) {
    const double qb = q_two_mode(ens, pp);
    const double qq = q_lossy_quadrature(small, tp, pp);
    CHECK(std::abs(qb - qq) < 1e-6);
  }
  CHECK(q_lossy_quadrature(small, 1.0, {{0.1, 0.0}, {0.0, 0.2}}) ==
        doctest::Approx(q_two_mode(small, {{0.1, 0.0}, {0.0, 0.2}})));
  CHECK_THROWS_AS(q_lossy_quadrature(small, 0.0, {{0, 0}, {0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("inefficient detector herald: weights, cutoff, and limits") {
  // eta = 1 reduces to the pure herald
  auto [e1, n1] = herald_with_inefficiency(kRef, 1.0);
  CHECK(e1.branches.size() == 1);
  CHECK(n1 == doctest::Approx(herald_prob(kRef.zeta, kRef.tau, kRef.m)));

  // frozen reference values for the lossy herald probability
  auto [e07, n07] = herald_with_inefficiency(kRef, 0.7);
  CHECK(n07 == doctest::Approx(1.593480e-3).epsilon(1e-5));
  CHECK(e07.total_weight() + e07.pruned_weight ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e07.branches.size() >= 6);  // m' = 3.. with visible binomial mass

  // herald probability grows monotonically with efficiency
  double prev = 0.0;
  for (double eta : {0.5, 0.7, 0.9, 1.0}) {
    const double ne = herald_with_inefficiency(kRef, eta).second;
    CHECK(ne > prev);
    prev = ne;
  }
  CHECK(herald_with_inefficiency(kRef, 0.5).second ==
        doctest::Approx(7.0134e-4).epsilon(1e-4));

  // explicit cutoffs: adequate passes, inadequate is rejected
  CHECK_NOTHROW(herald_with_inefficiency(kRef, 0.7, kRef.m + 40));
  CHECK_THROWS_AS(herald_with_inefficiency(kRef, 0.7, kRef.m + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(herald_with_inefficiency(kRef, 0.7, kRef.m - 1),
                  std::invalid_argument);

  // zero efficiency cannot herald clicks
  CHECK_THROWS_AS(herald_with_inefficiency(kRef, 0.0), ZeroProbabilityHerald);
  ModeParams m0 = kRef;
  m0.m = 0;
  CHECK_NOTHROW(herald_with_inefficiency(m0, 0.0));
}

TEST_CASE("lossy joint distribution is a probability distribution") {
  const auto jd = lossy_distribution(kRef, 0.8);
  double sum = 0.0, mean = 0.0;
  for (int n1 = 0; n1 < jd.dim; ++n1)
    for (int n2 = 0; n2 < jd.dim; ++n2) {
      CHECK(jd.at(n1, n2) >= 0.0);
      sum += jd.at(n1, n2);
      mean += (n1 + n2) * jd.at(n1, n2);
    }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  const double mean0 = mean_photon(psi_m_state(kRef).state);
  CHECK(mean == doctest::Approx(0.8 * mean0).epsilon(1e-9));
}

TEST_CASE("edge concentration survives moderate loss") {
  // the lossless reference state hugs the axes; a lossy version keeps most
  // of that structure at tau' = 0.8 (loss maps edges onto edges)
  const auto s = psi_m_state(kRef).state;
  const double off0 = off_edge_mass(s, 3);
  CHECK(off0 == doctest::Approx(0.01024).epsilon(0.02));
  const auto lossy = transmission_loss_commuted(kRef, 0.8);
  const double off_lossy = ensemble_off_edge_mass(lossy, 3);
  CHECK(off_lossy < 0.05);
}
