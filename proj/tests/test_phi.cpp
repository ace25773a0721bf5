#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wft/errors.hpp"
#include "wft/phi.hpp"

using namespace wft;

namespace {

double Square(double s) { return s * s; }
double Identity(double s) { return s; }

}  // namespace

TEST_CASE("modulus of continuity matches a dense oracle") {
  const ConvexFlux f = Example12Flux();
  const MonotoneProfile omega = ModulusOfContinuity(f.Inverse());
  CHECK(omega(1.0) == doctest::Approx(0.5));
  CHECK(omega(3.0) == doctest::Approx(1.0));
  for (double h = 0.0; h <= 6.0; h += 0.37) {
    const double ref = oracle::DenseModulus(oracle::Example12B, -3.0, 3.0, h, 6000);
    CHECK(omega(h) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(ModulusAt(f.Inverse(), h) == doctest::Approx(ref).epsilon(1e-9));
  }
  const MonotoneProfile id = ModulusOfContinuity(BurgersFlux().Inverse());
  for (double h = 0.0; h <= 2.0; h += 0.25) CHECK(id(h) == doctest::Approx(h));
}

TEST_CASE("modulus on an irregular profile") {
  const MonotoneProfile b({{0.0, 0.0}, {0.3, 0.9}, {1.0, 1.0}, {1.2, 2.0}, {3.0, 2.1}});
  auto bf = [&](double y) { return b.EvalClamped(y); };
  const MonotoneProfile omega = ModulusOfContinuity(b);
  for (double h = 0.0; h <= 3.0; h += 0.05) {
    CHECK(omega(h) == doctest::Approx(oracle::DenseModulus(bf, 0.0, 3.0, h, 30000)).epsilon(1e-4));
  }
}

TEST_CASE("modulus properties") {
  for (const ConvexFlux& f : {Example12Flux(), AtomicFlux(6), PowerFlux(2.0, 1.0, 1e-4)}) {
    const MonotoneProfile omega = ModulusOfContinuity(f.Inverse());
    CHECK(omega(0.0) == 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> h(0.0, 0.5 * omega.hi());
    for (int i = 0; i < 2000; ++i) {
      const double h1 = h(rng);
      const double h2 = h(rng);
      CHECK(omega(h1 + h2) <= omega(h1) + omega(h2) + 1e-12);
    }
    double prev = omega(omega.hi());
    for (double s = 0.5 * omega.hi(); s > 1e-9; s *= 0.5) {
      CHECK(omega(s) <= prev);
      prev = omega(s);
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("raw phi") {
  const ConvexFlux f = Example12Flux();
  const JumpProfile phi = PhiRaw(ModulusOfContinuity(f.Inverse()));
  CHECK(phi.Left(0.5) == doctest::Approx(1.0));
  CHECK(phi.Left(1.5) == doctest::Approx(5.0));
  CHECK(phi.Left(1.0) == doctest::Approx(2.0));
  CHECK(phi.Right(1.0) == doctest::Approx(4.0));
  CHECK(phi.Left(0.0) == 0.0);
  const JumpProfile id = PhiRaw(ModulusOfContinuity(BurgersFlux().Inverse()));
  CHECK(id.Left(0.7) == doctest::Approx(0.7));
}

TEST_CASE("gauge for the builtin fluxes") {
  const EnvelopeFunction e12 = BuildPhi(Example12Flux());
  CHECK(e12(1.5) == doctest::Approx(4.0));
  for (double s = 0.0; s <= 2.0; s += 0.01) CHECK(std::abs(e12(s) - oracle::Example12Phi(s)) <= 1e-9);
  const EnvelopeFunction burgers = BuildPhi(BurgersFlux());
  for (double s = 0.0; s <= 2.0; s += 0.125) CHECK(burgers(s) == s);
  CHECK_THROWS_AS(burgers(2.5), DomainError);
}

TEST_CASE("power gauge is h^3/4") {
  const EnvelopeFunction phi = BuildPhi(PowerFlux(3.0));
  for (double h = 0.1; h <= 1.0 + 1e-12; h += 0.01) {
    CHECK(std::abs(phi(h) / (h * h * h) - 0.25) <= 0.25e-6);
  }
}

TEST_CASE("gauge chain inequality and superadditivity") {
  for (const ConvexFlux& f : {Example12Flux(), BurgersFlux(), AtomicFlux(6), PowerFlux(2.0, 1.0, 1e-4)}) {
    const EnvelopeFunction phi = BuildPhi(f);
    const MonotoneProfile& b = f.Inverse();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> y(b.lo(), b.hi());
    std::uniform_real_distribution<double> s(0.0, 0.5 * phi.upper());
    int bad = 0;
    for (int i = 0; i < 100000; ++i) {
      const double y1 = y(rng);
      const double y2 = y(rng);
      if (phi(std::abs(b(y1) - b(y2))) > std::abs(y1 - y2) + 1e-12) ++bad;
    }
    CHECK(bad == 0);
    for (int i = 0; i < 2000; ++i) {
      const double a = s(rng);
      const double c = s(rng);
      CHECK(phi(a + c) >= phi(a) + phi(c) - 1e-12);
    }
    for (double h = 1e-3; h < phi.upper(); h *= 2) CHECK(phi(h) > 0.0);
  }
}

TEST_CASE("variation examples") {
  const std::vector<double> v{0.0, 1.0, 0.5, 2.0};
  CHECK(TvPhi(v, Identity, Sign::kSigned).value == 3.0);
  const VariationReport sq = TvPhi(v, Square, Sign::kSigned);
  CHECK(sq.value == 4.0);
  REQUIRE(sq.chain.size() == 2);
  CHECK(v[sq.chain[0]] == 0.0);
  CHECK(v[sq.chain[1]] == 2.0);
  CHECK(EvaluateChain(v, sq.chain, Square, Sign::kSigned) == sq.value);
  const std::vector<double> w{1.0, 0.0, 2.0};
  CHECK(TvPhi(w, Identity, Sign::kPositive).value == 2.0);
  CHECK(Tv(w, Sign::kSigned).value == 3.0);
  CHECK(Tv(w, Sign::kPositive).value == 2.0);
  CHECK(ToString(sq.mode) == "TV^Phi");
}

TEST_CASE("dynamic program equals exhaustive enumeration") {
  const EnvelopeFunction e12 = BuildPhi(Example12Flux());
  const std::vector<GaugeFn> gauges{Identity, Square, [&](double s) { return e12(s); }};
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& x : v) x = val(rng);
    for (const GaugeFn& g : gauges) {
      for (Sign sign : {Sign::kSigned, Sign::kPositive}) {
        const VariationReport r = TvPhi(v, g, sign);
        CHECK(r.value == oracle::BruteForceVariation(v, g, sign == Sign::kPositive));
        CHECK(EvaluateChain(v, r.chain, g, sign) == r.value);
      }
      CHECK(TvPhi(v, g, Sign::kPositive).value <= TvPhi(v, g, Sign::kSigned).value);
      std::vector<double> doubled;
      for (double x : v) {
        doubled.push_back(x);
        doubled.push_back(x);
      }
      CHECK(TvPhi(doubled, g, Sign::kSigned).value == TvPhi(v, g, Sign::kSigned).value);
    }
    CHECK(TvPhi(v, Identity, Sign::kSigned).value == doctest::Approx(Tv(v, Sign::kSigned).value));
  }
}

TEST_CASE("interval variation of step functions") {
  const StepFunction shock({0.0}, {1.0, -1.0});
  CHECK(TvPhiInterval(shock, Identity, -1.0, 1.0, Sign::kPositive).value == 0.0);
  CHECK(TvPhiInterval(StepFunction::Constant(0.3), Square, -2.0, 2.0, Sign::kSigned).value == 0.0);
  // Example-12 profile at t = 1 sampled as a fine staircase.
  std::vector<double> bps;
  std::vector<double> vals{-1.0};
  for (int i = 0; i <= 1000; ++i) {
    const double x = -5.0 + 10.0 * i / 1000;
    bps.push_back(x);
    vals.push_back(oracle::Example12U(x));
  }
  const StepFunction u(bps, vals);
  const VariationReport r = TvPhiInterval(u, Identity, -5.0, 5.0, Sign::kPositive);
  CHECK(r.value == doctest::Approx(2.0));
  REQUIRE(r.interval.has_value());
  CHECK_THROWS_AS(TvPhiInterval(u, Identity, 1.0, 1.0, Sign::kSigned), DomainError);
}
