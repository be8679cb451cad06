#include <doctest.h>

#include <cmath>

#include "noonsim/bell.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/noon.hpp"
#include "noonsim/rng.hpp"

using namespace noonsim;

namespace {

PureState2 vacuum2() {
  PureState2 v;
  v.dim = 1;
  v.amps = {cplx(1, 0)};
  return v;
}

const ModeParams kRef{cplx(1.0, 0.0), cplx(0.0, 2.68), 0.9, 3};

}  // namespace

TEST_CASE("vacuum: all-zero settings give exactly -2") {
  const BellSettings zero{};
  CHECK(j1_value(vacuum2(), zero) == -2.0);
  CHECK(j1_value(vacuum2(), zero, Convention::symmetrized) == -2.0);
}

TEST_CASE("vacuum: the supremum over settings is 1") {
  MaximizeOptions o;
  o.n_starts = 17;
  const auto r = maximize_j1(vacuum2(), o);
  CHECK(r.converged);
  CHECK(r.j1 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single-photon path superposition: zero settings give 2") {
  PureState2 s;
  s.dim = 2;
  s.amps.assign(4, cplx(0, 0));
  const double rt = std::sqrt(0.5);
  s.at(1, 0) = rt;
  s.at(0, 1) = rt;
  const BellSettings zero{};
  // sqrt(0.5)^2 re-rounds by an ulp under fused contraction, so "exactly 2"
  // only holds per backend; assert to near machine precision instead
  CHECK(j1_value(s, zero) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j1_value(s, zero, Convention::symmetrized) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("weak squeezing approaches the single-photon ceiling") {
  ModeParams p{cplx(0.05, 0.0), cplx(0, 0), 0.9, 1};
  p.lambda = cplx(0.0, 1e-3);
  MaximizeOptions o;
  o.n_starts = 17;
  const auto r = maximize_j1(psi_m_state(p).state, o);
  CHECK(r.j1 == doctest::Approx(1.999994).epsilon(2e-5));
}

TEST_CASE("the functional is bounded by its algebraic range") {
  // each single term lies in [0,1], each pair term in [0,1]
  ModeParams p{cplx(0.9, 0.0), cplx(0.0, 1.7), 0.9, 2};
  const auto s = psi_m_state(p).state;
  SplitMix64 g(3);
  auto u = [&](double sc) { return sc * (2 * g.uniform() - 1); };
  for (int t = 0; t < 40; ++t) {
    const BellSettings bs{{u(3), u(3)}, {u(3), u(3)}, {u(3), u(3)}, {u(3), u(3)}};
    const double j = j1_value(s, bs);
    CHECK(j >= -6.0);
    CHECK(j <= 4.0);
  }
}

TEST_CASE("reported maximum is reproducible from the reported settings") {
  MaximizeOptions o;
  o.n_starts = 9;
  const auto s = psi_m_state(kRef).state;
  const auto r = maximize_j1(s, o);
  CHECK(r.converged);
  CHECK(j1_value(s, r.settings) == doctest::Approx(r.j1).epsilon(1e-12));
  CHECK(int(r.start_values.size()) == r.starts_used);
}

TEST_CASE("raising the start count never lowers the maximum") {
  // the start sequence is prefix-stable, so the best-over-starts is
  // monotone in n_starts by construction; check it end to end
  const auto s = psi_m_state(kRef).state;
  double prev = -1e300;
  for (int n : {1, 5, 17}) {
    MaximizeOptions o;
    o.n_starts = n;
    const auto r = maximize_j1(s, o);
    CHECK(r.j1 >= prev - 1e-12);
    prev = r.j1;
  }
}

TEST_CASE("reference point violates the inequality under both conventions") {
  const auto s = psi_m_state(kRef).state;
  for (auto cv : {Convention::mode1, Convention::symmetrized}) {
    MaximizeOptions o;
    o.convention = cv;
    const auto r = maximize_j1(s, o);
    CHECK(r.j1 == doctest::Approx(1.786674).epsilon(2e-5));
  }
}

TEST_CASE("no-subtraction source still shows the clustered-settings excess") {
  // with m = 0 the output is Gaussian, yet the functional exceeds 1 at
  // clustered near-origin settings; the supremum is a structural artifact
  // of coinciding settings, not an entanglement witness
  ModeParams p{cplx(1.0, 0.0), cplx(0.0, 2.68), 0.9, 0};
  MaximizeOptions o;
  o.n_starts = 17;
  const auto r = maximize_j1(psi_m_state(p).state, o);
  CHECK(r.j1 == doctest::Approx(1.350193).epsilon(5e-4));
  // and the winning settings indeed cluster
  const auto& st = r.settings;
  CHECK(std::abs(st.alpha - st.beta) < 0.05);
  CHECK(std::abs(st.alpha - st.gamma) < 0.05);
  CHECK(std::abs(st.alpha - st.delta) < 0.05);
}

TEST_CASE("sweep carries per-cell errors instead of aborting") {
  MaximizeOptions o;
  o.n_starts = 3;
  // zeta = 0 with one subtraction cannot herald: that cell must fail soft
  const auto recs = sweep_zeta_lambda({1}, {0.0, 0.3}, {0.5}, 0.9, o);
  REQUIRE(recs.size() == 2);
  CHECK(!recs[0].error.empty());
  CHECK(recs[1].error.empty());
  CHECK(recs[1].j1 > 1.0);  // small zeta sits near the ceiling of 2
}

TEST_CASE("scan record grids populate in order") {
  MaximizeOptions o;
  o.n_starts = 5;
  const auto er = eta_scan(kRef, {0.9, 1.0}, o);
  REQUIRE(er.size() == 2);
  CHECK(er[0].eta == 0.9);
  CHECK(er[1].eta == 1.0);
  CHECK(er[0].n_eta < er[1].n_eta);
  CHECK(er[0].j1 > 1.0);
  CHECK(er[1].j1 > 1.0);

  const auto tr = tau_prime_scan(kRef, {0.9, 1.0}, true, o);
  REQUIRE(tr.size() == 2);
  CHECK(tr[0].mean_photon ==
        doctest::Approx(0.9 * tr[1].mean_photon).epsilon(1e-9));
  CHECK(tr[0].has_ecs);
  // the parity-matched comparison state for odd m
  CHECK(tr[0].ecs_j1 > tr[0].j1);
}

TEST_CASE("phase scan: frozen settings decay, reoptimized settings do not") {
  MaximizeOptions o;
  o.n_starts = 9;
  const auto frozen = phase_scan(1.0, 2.68, 0.9, 3, {0.0, 0.3, 0.45}, false, o);
  REQUIRE(frozen.size() == 3);
  CHECK(frozen[0].j1 == doctest::Approx(1.786674).epsilon(2e-5));
  CHECK(frozen[0].j1 > frozen[1].j1);
  CHECK(frozen[1].j1 > frozen[2].j1);
  CHECK(frozen[2].j1 < 1.0);  // past the violation window

  // the maximized value is exactly phase-independent: the displacement
  // phase is absorbed into the clustered settings
  const auto reopt = phase_scan(1.0, 2.68, 0.9, 3, {0.0, 0.45}, true, o);
  CHECK(reopt[0].j1 == doctest::Approx(reopt[1].j1).epsilon(1e-6));

  CHECK_THROWS_AS(phase_scan(1.0, 2.68, 0.9, 3, {2.0}, false, o),
                  std::invalid_argument);
}
