#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fixorder/errors.hpp"
#include "fixorder/interconnect.hpp"
#include "fixorder/rational.hpp"
#include "fixorder/statespace.hpp"
#include "test_util.hpp"

using namespace fixorder;

namespace {

// Frequency-domain lower LFT with positive feedback u = K y, evaluated
// directly from the partitioned transfer matrix.
CMat lft_eval(const StateSpaceModel& p, const StateSpaceModel& k, Complex s) {
  const int ny = p.nmeas(), nu = p.ncont();
  const int nz = p.outputs() - ny, nw = p.inputs() - nu;
  const CMat pt = p.eval(s);
  const CMat kt = k.eval(s);
  const CMat p11 = pt.topLeftCorner(nz, nw), p12 = pt.topRightCorner(nz, nu);
  const CMat p21 = pt.bottomLeftCorner(ny, nw), p22 = pt.bottomRightCorner(ny, nu);
  const CMat inner = CMat::Identity(ny, ny) - p22 * kt;
  return p11 + p12 * kt * inner.partialPivLu().solve(p21);
}

}  // namespace

TEST_SUITE("interconnect") {

TEST_CASE("close_loop matches the frequency-domain LFT") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpaceModel p =
        mktito(testutil::random_stable_system(4, 3, 3, rng), 2, 1);
    const StateSpaceModel k = testutil::random_stable_system(2, 1, 2, rng);
    const StateSpaceModel cl = close_loop(p, k);
    CHECK(cl.states() == 6);
    CHECK(cl.inputs() == 2);
    CHECK(cl.outputs() == 1);
    for (const Complex s : {Complex{0.0, 0.35}, Complex{0.0, 2.6}, Complex{0.5, 1.0}})
      CHECK((cl.eval(s) - lft_eval(p, k, s)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("close_loop handles plant feedthrough into the controller") {
  std::mt19937_64 rng(22);
  const StateSpaceModel p =
      mktito(testutil::random_stable_system(3, 2, 2, rng, 0.4), 1, 1);
  const StateSpaceModel k = testutil::random_stable_system(2, 1, 1, rng, 0.4);
  const StateSpaceModel cl = close_loop(p, k);
  for (const Complex s : {Complex{0.1, 0.9}, Complex{0.0, 3.0}})
    CHECK((cl.eval(s) - lft_eval(p, k, s)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("close_loop rejects a direct algebraic loop") {
  const Mat z = Mat::Zero(1, 1);
  const StateSpaceModel p(z, Mat::Ones(1, 2), Mat::Ones(2, 1), Mat::Ones(2, 2),
                          Partition{1, 1});
  const StateSpaceModel k(Mat(), Mat::Zero(0, 1), Mat::Zero(1, 0), Mat::Ones(1, 1));
  CHECK_THROWS_AS(close_loop(p, k), AlgebraicLoopError);
}

TEST_CASE("close_loop validates controller dimensions") {
  std::mt19937_64 rng(23);
  const StateSpaceModel p =
      mktito(testutil::random_stable_system(3, 2, 2, rng), 1, 1);
  const StateSpaceModel wrong = testutil::random_stable_system(1, 2, 1, rng);
  CHECK_THROWS_AS(close_loop(p, wrong), DimensionError);
  CHECK_THROWS_AS(close_loop(testutil::random_stable_system(2, 2, 2, rng), p),
                  ConfigError);
}

TEST_CASE("augw stacks weighted channels over the raw error") {
  std::mt19937_64 rng(24);
  const StateSpaceModel g = testutil::random_stable_system(3, 2, 2, rng, 0.3);
  const RationalSiso w1({1.0, 2.0}, {1.0, 0.5});
  const RationalSiso w2 = RationalSiso::constant(0.7);
  const RationalSiso w3({0.4}, {1.0, 1.0});
  const StateSpaceModel p = augw(g, w1, w2, w3);

  CHECK(p.nmeas() == 2);
  CHECK(p.ncont() == 2);
  CHECK(p.inputs() == 4);
  CHECK(p.outputs() == 8);  // z1(2) z2(2) z3(2) y(2)

  const Complex s{0.2, 1.3};
  const CMat gt = g.eval(s);
  const Complex v1 = w1.eval(s), v2 = w2.eval(s), v3 = w3.eval(s);
  const CMat id = CMat::Identity(2, 2);
  const CMat pt = p.eval(s);
  CHECK((pt.block(0, 0, 2, 2) - v1 * id).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((pt.block(0, 2, 2, 2) + v1 * gt).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((pt.block(2, 0, 2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((pt.block(2, 2, 2, 2) - v2 * id).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((pt.block(4, 2, 2, 2) - v3 * gt).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((pt.block(6, 0, 2, 2) - id).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((pt.block(6, 2, 2, 2) + gt).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("augw skips absent weights") {
  std::mt19937_64 rng(25);
  const StateSpaceModel g = testutil::random_stable_system(2, 1, 1, rng);
  const StateSpaceModel p = augw(g, RationalSiso::constant(1.0), std::nullopt,
                                 std::nullopt);
  CHECK(p.outputs() == 2);  // z1, y
  CHECK(p.inputs() == 2);
  CHECK_THROWS_AS(augw(g, std::nullopt, std::nullopt, std::nullopt), ConfigError);
}

TEST_CASE("augw rejects an improper weight") {
  std::mt19937_64 rng(26);
  const StateSpaceModel g = testutil::random_stable_system(2, 1, 1, rng);
  CHECK_THROWS_AS(augw(g, RationalSiso::s(), std::nullopt, std::nullopt),
                  NonProperError);
}

TEST_CASE("sensitivity and complementary loops sum to identity") {
  std::mt19937_64 rng(27);
  const StateSpaceModel g = testutil::random_stable_system(3, 1, 1, rng, 0.1);
  const StateSpaceModel k = testutil::random_stable_system(1, 1, 1, rng, 0.1);
  const StateSpaceModel s_loop = sensitivity_loop(g, k);
  const StateSpaceModel t_loop = complementary_loop(g, k);
  for (const Complex s : {Complex{0.0, 0.4}, Complex{0.0, 2.0}, Complex{0.3, 1.0}}) {
    const Complex gv = g.eval(s)(0, 0), kv = k.eval(s)(0, 0);
    const Complex sv = 1.0 / (1.0 + gv * kv);
    CHECK(std::abs(s_loop.eval(s)(0, 0) - sv) < 1e-9);
    CHECK(std::abs(t_loop.eval(s)(0, 0) - (1.0 - sv)) < 1e-9);
  }
}

}  // TEST_SUITE
