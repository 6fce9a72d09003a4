#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "doctest.h"
#include "fixorder/analysis.hpp"
#include "fixorder/errors.hpp"
#include "fixorder/statespace.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace fixorder;

namespace {

StateSpaceModel siso(double a, double b, double c, double d) {
  return StateSpaceModel(Mat::Constant(1, 1, a), Mat::Constant(1, 1, b),
                         Mat::Constant(1, 1, c), Mat::Constant(1, 1, d));
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("spectral_abscissa_value is the largest real part") {
  Mat A(3, 3);
  A << -2.0, 1.0, 0.0, 0.0, -0.5, 3.0, 0.0, 0.0, -4.0;
  CHECK(spectral_abscissa_value(A) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(spectral_abscissa_value(Mat()) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("eig_triple returns matched left and right eigenvectors") {
  std::mt19937_64 rng(31);
  const Mat A = testutil::random_matrix(6, 6, rng);
  const EigTriple t = eig_triple(A);
  REQUIRE(t.values.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const Complex lam = t.values(i);
    const CVec x = t.right.col(i);
    const CVec y = t.left.col(i);
    CHECK((A.cast<Complex>() * x - lam * x).norm() < 1e-8 * x.norm());
    CHECK((y.adjoint() * A.cast<Complex>() - lam * y.adjoint()).norm() <
          1e-8 * y.norm());
    // Matched pairs must not be orthogonal or the eigenvalue derivative blows up.
    CHECK(std::abs(y.dot(x)) > 1e-8 * x.norm() * y.norm());
  }
}

TEST_CASE("spectral_abscissa agrees with the eigenvalue list") {
  std::mt19937_64 rng(32);
  const StateSpaceModel sys = testutil::random_stable_system(5, 1, 1, rng);
  const auto [alpha, trip] = spectral_abscissa(sys);
  CHECK(alpha == doctest::Approx(trip.values.real().maxCoeff()).epsilon(1e-14));
  CHECK(alpha == doctest::Approx(spectral_abscissa_value(sys.A())).epsilon(1e-14));
}

TEST_CASE("hinf_norm of a first-order lag peaks at DC") {
  const HinfResult hr = hinf_norm(siso(-3.0, 1.0, 2.0, 0.0), 1e-8);
  CHECK(hr.converged);
  CHECK(hr.norm == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  CHECK(hr.peak_frequency < 1e-4);
}

TEST_CASE("hinf_norm of a resonant mode matches the closed form") {
  // wn^2/(s^2 + 2 z wn s + wn^2): peak 1/(2 z sqrt(1-z^2)) at wn sqrt(1-2 z^2).
  const double wn = 2.0, z = 0.1;
  Mat A(2, 2), B(2, 1), C(1, 2), D(1, 1);
  A << 0.0, 1.0, -wn * wn, -2.0 * z * wn;
  B << 0.0, 1.0;
  C << wn * wn, 0.0;
  D << 0.0;
  const HinfResult hr = hinf_norm(StateSpaceModel(A, B, C, D), 1e-9);
  const double want = 1.0 / (2.0 * z * std::sqrt(1.0 - z * z));
  const double wpeak = wn * std::sqrt(1.0 - 2.0 * z * z);
  CHECK(hr.converged);
  CHECK(hr.norm == doctest::Approx(want).epsilon(1e-8));
  CHECK(hr.peak_frequency == doctest::Approx(wpeak).epsilon(1e-5));
}

TEST_CASE("hinf_norm returns the feedthrough floor when the tail dominates") {
  // 5 - 4/(s+1): gain 1 at DC, 5 at infinity.
  const HinfResult hr = hinf_norm(siso(-1.0, 1.0, -4.0, 5.0), 1e-8);
  CHECK(hr.converged);
  CHECK(hr.norm == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(hr.peak_frequency > 1e6);
}

TEST_CASE("hinf_norm special cases") {
  CHECK(std::isinf(hinf_norm(siso(0.5, 1.0, 1.0, 0.0)).norm));  // unstable
  const StateSpaceModel gain(Mat(), Mat::Zero(0, 2), Mat::Zero(2, 0),
                             (Mat(2, 2) << 3.0, 0.0, 0.0, 1.0).finished());
  CHECK(hinf_norm(gain).norm == doctest::Approx(3.0));
  CHECK(hinf_norm(siso(-1.0, 0.0, 1.0, 0.0)).norm == 0.0);  // zero system
  CHECK_THROWS_AS(hinf_norm(siso(-1.0, 1.0, 1.0, 0.0), 0.0), ConfigError);
}

TEST_CASE("hinf_level_certified brackets the norm") {
  const StateSpaceModel lag = siso(-3.0, 1.0, 2.0, 0.0);  // norm 2/3
  CHECK(hinf_level_certified(lag, 0.7));
  CHECK(!hinf_level_certified(lag, 0.6));
  CHECK_THROWS_AS(hinf_level_certified(siso(1.0, 1.0, 1.0, 0.0), 1.0), ConfigError);
  CHECK_THROWS_AS(hinf_level_certified(siso(-1.0, 1.0, 1.0, 2.0), 1.5), ConfigError);
}

TEST_CASE("hinf_norm agrees with a dense frequency sweep") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 40; ++i) {
    const StateSpaceModel sys = testutil::random_peaked_system(rng, i);
    const HinfResult hr = hinf_norm(sys, 1e-8);
    REQUIRE(hr.converged);
    const oracle::HinfEstimate est = oracle::hinf_by_sweep(sys);
    CHECK(testutil::rel_err(hr.norm, est.norm) < 1e-6);
  }
}

TEST_CASE("sigma matches direct evaluation and its serial reference") {
  std::mt19937_64 rng(34);
  const StateSpaceModel sys = testutil::random_stable_system(5, 3, 2, rng);
  const std::vector<double> grid = log_grid(1e-2, 1e2, 60);
  const Mat par = sigma(sys, grid);
  const Mat ser = sigma_serial(sys, grid);
  REQUIRE(par.rows() == 60);
  REQUIRE(par.cols() == 2);  // min(p, m) singular values per row
  CHECK(par == ser);         // bit-identical, not approximately equal
  for (const int i : {0, 17, 59})
    CHECK(par(i, 0) == doctest::Approx(oracle::sigma_max_at(sys, grid[i])).epsilon(1e-10));
  for (int i = 0; i < 60; ++i) CHECK(par(i, 0) >= par(i, 1));
}

TEST_CASE("sigma rejects bad frequencies and singular evaluation points") {
  std::mt19937_64 rng(35);
  const StateSpaceModel sys = testutil::random_stable_system(2, 1, 1, rng);
  CHECK_THROWS_AS(sigma(sys, {-1.0}), ConfigError);
  CHECK_THROWS_AS(sigma(sys, {std::numeric_limits<double>::quiet_NaN()}), ConfigError);

  Mat A(2, 2);
  A << 0.0, 1.0, -1.0, 0.0;  // poles at exactly +-j
  const StateSpaceModel osc(A, Mat::Ones(2, 1), Mat::Ones(1, 2), Mat::Zero(1, 1));
  CHECK_THROWS_AS(sigma(osc, {1.0}), SingularFrequencyError);
  CHECK_NOTHROW(sigma(osc, {0.5}));
}

TEST_CASE("log_grid hits both endpoints exactly") {
  const std::vector<double> g = log_grid(1e-2, 1e2, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(log_grid(2.0, 2.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(log_grid(2.0, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(log_grid(1.0, 2.0, 0), ConfigError);
}

TEST_CASE("step_response reproduces first-order dynamics exactly") {
  const StateSpaceModel lag = siso(-1.0, 1.0, 1.0, 0.0);
  const StepResponse r = step_response(lag, 4.0, 81);
  REQUIRE(r.t.size() == 81);
  REQUIRE(r.y.size() == 81);
  CHECK(r.t.front() == 0.0);
  CHECK(r.t.back() == doctest::Approx(4.0));
  for (const int i : {0, 20, 40, 80})
    CHECK(r.y[i](0, 0) == doctest::Approx(1.0 - std::exp(-r.t[i])).epsilon(1e-10));
}

TEST_CASE("step_response of an integrator is a ramp") {
  const StateSpaceModel integ = siso(0.0, 1.0, 1.0, 0.0);
  const StepResponse r = step_response(integ, 2.0, 21);
  for (const int i : {5, 10, 20})
    CHECK(r.y[i](0, 0) == doctest::Approx(r.t[i]).epsilon(1e-10));
}

TEST_CASE("step_response flags overflow on a fast unstable mode") {
  CHECK_THROWS_AS(step_response(siso(5.0, 1.0, 1.0, 0.0), 300.0, 50), NumericalError);
  CHECK_THROWS_AS(step_response(siso(-1.0, 1.0, 1.0, 0.0), 0.0, 10), ConfigError);
  CHECK_THROWS_AS(step_response(siso(-1.0, 1.0, 1.0, 0.0), 1.0, 1), ConfigError);
}

TEST_CASE("dc_gain matches the transfer matrix at s = 0") {
  std::mt19937_64 rng(36);
  const StateSpaceModel sys = testutil::random_stable_system(4, 2, 3, rng);
  const Mat g = dc_gain(sys);
  const CMat w = sys.eval({0.0, 0.0});
  CHECK((g - w.real()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(dc_gain(siso(0.0, 1.0, 1.0, 0.0)), NumericalError);
  const StateSpaceModel gain(Mat(), Mat::Zero(0, 1), Mat::Zero(1, 0),
                             Mat::Constant(1, 1, 2.5));
  CHECK(dc_gain(gain)(0, 0) == 2.5);
}

}  // TEST_SUITE
