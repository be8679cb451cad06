#include <doctest.h>

#include <cmath>

#include "noonsim/husimi.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/kernels.hpp"
#include "noonsim/quadrature.hpp"
#include "noonsim/rng.hpp"

using namespace noonsim;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("two-mode Q of simple states has its textbook values") {
  PureState2 vac;
  vac.dim = 1;
  vac.amps = {cplx(1, 0)};
  CHECK(q_two_mode(vac, {{0, 0}, {0, 0}}) ==
        doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-14));

  // product of coherent states: Q = e^{-|a1-b1|^2 - |a2-b2|^2} / pi^2
  const cplx b1(0.6, -0.2), b2(-0.3, 0.9);
  const auto s = tensor(make_coherent(b1), make_coherent(b2));
  SplitMix64 g(5);
  for (int t = 0; t < 6; ++t) {
    const PhasePoint p{{2 * g.uniform() - 1 + b1.real(), 2 * g.uniform() - 1},
                       {2 * g.uniform() - 1, 2 * g.uniform() - 1 + b2.imag()}};
    const double want =
        std::exp(-std::norm(p.a1 - b1) - std::norm(p.a2 - b2)) / (kPi * kPi);
    CHECK(q_two_mode(s, p) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("the two Gaussian-Q forms are the same function") {
  SplitMix64 g(11);
  auto u = [&](double s) { return s * (2 * g.uniform() - 1); };
  for (int t = 0; t < 60; ++t) {
    const cplx lam(u(2.5), u(2.5)), zeta(u(1.4), u(1.4)), al(u(3.5), u(3.5));
    const double q1 = q_analytic_squeezed_coherent(al, lam, zeta);
    const double q2 = GaussianQ::from_params(lam, zeta).eval(al);
    CHECK(std::abs(q1 - q2) <= 1e-13 * std::max(q1, 1e-30));
  }
}

TEST_CASE("Gaussian Q matches the Fock route for displaced squeezed states") {
  const cplx lam(0.8, 1.1), zeta(0.0, 0.9);
  const auto s = make_displaced_squeezed(lam, zeta);
  const auto& k = kernels::active();
  for (double x : {-1.0, 0.3, 1.6}) {
    for (double y : {-0.5, 1.2, 2.1}) {
      const auto row = coherent_row(cplx(x, y), s.dim());
      const double qf =
          std::norm(k.cdotc(row.data(), s.amps.data(), s.dim())) / kPi;
      const double qa = q_analytic_squeezed_coherent(cplx(x, y), lam, zeta);
      CHECK(std::abs(qa - qf) < 1e-10);
    }
  }
}

TEST_CASE("subtracted-state Q: analytic and Fock routes coincide") {
  SplitMix64 g(23);
  auto u = [&](double s) { return s * (2 * g.uniform() - 1); };
  const auto& k = kernels::active();
  for (double zv : {0.5, 1.0, 2.0}) {
    for (int m : {0, 1, 2, 3}) {
      const cplx zeta(zv, 0.0);
      const auto zm = subtract_photons(zeta, 0.9, m).state;
      for (int t = 0; t < 4; ++t) {
        const cplx al(u(2.5), u(2.5));
        const auto row = coherent_row(al, zm.dim());
        const double qf =
            std::norm(k.cdotc(row.data(), zm.amps.data(), zm.dim())) / kPi;
        const double qa = q_analytic_subtracted(al, zeta, 0.9, m);
        CHECK(std::abs(qa - qf) < 1e-8);
      }
    }
  }
}

TEST_CASE("two-mode output Q factorizes into sum and difference arms") {
  ModeParams p{cplx(1.0, 0.0), cplx(0.0, 2.68), 0.9, 3};
  const auto h = psi_m_state(p);
  SplitMix64 g(31);
  auto u = [&](double s) { return s * (2 * g.uniform() - 1); };
  for (int t = 0; t < 8; ++t) {
    const PhasePoint pp{{u(2), u(2)}, {u(2), u(2)}};
    const double qa = q_analytic_output(pp, p.zeta, p.lambda, p.tau, p.m);
    const double qf = q_two_mode(h.state, pp);
    CHECK(std::abs(qa - qf) < 1e-8);
  }
}

TEST_CASE("exact marginal equals the integrated Q, both modes") {
  ModeParams p{cplx(0.7, 0.0), cplx(0.0, 1.2), 0.9, 1};
  const auto h = psi_m_state(p);
  const double L = 2.0 * std::sqrt(double(h.state.dim));
  for (int mode : {1, 2}) {
    const cplx a(0.4, -0.8);
    const double exact = q_marginal(h.state, a, mode);
    const double quad =
        kPi * integrate_2d(
                  [&](double x, double y) {
                    const cplx other(x, y);
                    const PhasePoint pp = (mode == 1)
                                              ? PhasePoint{a, other}
                                              : PhasePoint{other, a};
                    return q_two_mode(h.state, pp);
                  },
                  -L, L, -L, L, 1e-9);
    CHECK(std::abs(exact - quad) < 1e-7);
  }
  CHECK_THROWS_AS(q_marginal(h.state, cplx(0, 0), 3), std::invalid_argument);
}

TEST_CASE("degenerate and out-of-range herald parameters") {
  CHECK_THROWS_AS(q_analytic_subtracted_unnormalized(cplx(0, 0), cplx(1, 0),
                                                     0.9, 17),
                  std::domain_error);
  CHECK_THROWS_AS(q_analytic_subtracted(cplx(0, 0), cplx(1, 0), 1.0, 2),
                  ZeroProbabilityHerald);
  // the unnormalized numerator vanishes identically when the tap is absent
  SplitMix64 g(47);
  for (int t = 0; t < 5; ++t) {
    const cplx al(3 * g.uniform(), 3 * g.uniform());
    CHECK(std::abs(q_analytic_subtracted_unnormalized(al, cplx(1, 0), 1.0, 2)) <
          1e-12);
  }
  // m = 0 through a perfect tap is just the squeezed vacuum
  for (int t = 0; t < 5; ++t) {
    const cplx al(2 * g.uniform(), 2 * g.uniform());
    CHECK(q_analytic_subtracted(al, cplx(0.8, 0), 1.0, 0) ==
          doctest::Approx(q_analytic_squeezed_coherent(al, cplx(0, 0),
                                                       cplx(0.8, 0)))
              .epsilon(1e-12));
  }
}

TEST_CASE("truncation error bound covers the actual truncation error") {
  ModeParams p{cplx(1.0, 0.0), cplx(0.0, 2.0), 0.9, 2};
  const auto full = psi_m_state(p).state;
  // plain block cut, no renormalization: exactly the situation the bound
  // is defined for (state mass the small grid cannot see)
  PureState2 small;
  small.dim = 18;
  small.amps.assign(18 * 18, cplx(0, 0));
  for (int n1 = 0; n1 < 18; ++n1)
    for (int n2 = 0; n2 < 18; ++n2) small.at(n1, n2) = full.at(n1, n2);
  // evaluate far enough out that dim 18 visibly misses amplitude
  const PhasePoint pp{{2.5, 0.0}, {0.0, 2.5}};
  double bound = 0.0;
  const double q_small = q_two_mode(small, pp, &bound);
  const double q_full = q_two_mode(full, pp);
  CHECK(std::abs(q_small - q_full) <= bound + 1e-15);
  CHECK(bound > 0.0);
}

TEST_CASE("coherent rows stay finite and normalized past the underflow knee") {
  // |alpha|^2 = 1521 would underflow exp(-|alpha|^2/2); the row must still
  // carry its unit norm around n ~ 1521
  const cplx al(39.0, 0.0);
  const int dim = 2200;
  const auto row = coherent_row(al, dim);
  CHECK(kernels::active().norm_sq(row.data(), row.size()) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // overlap of two nearby giant coherent states: |<a|b>|^2 = e^{-|a-b|^2}
  const cplx be(39.0, 0.1);
  const auto rob = coherent_row(be, dim);
  const cplx ov = kernels::active().cdotc(row.data(), rob.data(), dim);
  CHECK(std::norm(ov) ==
        doctest::Approx(std::exp(-std::norm(al - be))).epsilon(1e-8));
}

TEST_CASE("ensemble Q and marginal are the weighted branch sums") {
  ModeParams p{cplx(0.6, 0.0), cplx(0.0, 0.9), 0.8, 1};
  const auto h = psi_m_state(p);
  StateEnsemble e;
  e.branches.push_back({0.25, h.state});
  e.branches.push_back({0.75, tensor(make_vacuum(2), make_vacuum(2))});
  const PhasePoint pp{{0.3, 0.1}, {-0.2, 0.5}};
  const double want = 0.25 * q_two_mode(h.state, pp) +
                      0.75 * q_two_mode(e.branches[1].state, pp);
  CHECK(q_two_mode(e, pp) == doctest::Approx(want).epsilon(1e-14));
  const double wm = 0.25 * q_marginal(h.state, pp.a1, 1) +
                    0.75 * q_marginal(e.branches[1].state, pp.a1, 1);
  CHECK(q_marginal(e, pp.a1, 1) == doctest::Approx(wm).epsilon(1e-14));
}
