#include "fixorder/interconnect.hpp"

#include <string>

#include "fixorder/errors.hpp"

namespace fixorder {

namespace {

// Scalar weight realized once, then replicated diagonally over q channels.
struct WeightBlock {
  Mat A, B, C, D;  // q*nw states, q inputs, q outputs
  int nx = 0;
};

WeightBlock replicate(const RationalSiso& w, int q) {
  const StateSpaceModel sys = tf_to_ss(w);
  const int nw = sys.states();
  WeightBlock blk;
  blk.nx = q * nw;
  blk.A = Mat::Zero(blk.nx, blk.nx);
  blk.B = Mat::Zero(blk.nx, q);
  blk.C = Mat::Zero(q, blk.nx);
  blk.D = sys.D()(0, 0) * Mat::Identity(q, q);
  for (int i = 0; i < q; ++i) {
    blk.A.block(i * nw, i * nw, nw, nw) = sys.A();
    blk.B.block(i * nw, i, nw, 1) = sys.B();
    blk.C.block(i, i * nw, 1, nw) = sys.C();
  }
  return blk;
}

}  // namespace

StateSpaceModel augw(const StateSpaceModel& g,
                     const std::optional<RationalSiso>& w1,
                     const std::optional<RationalSiso>& w2,
                     const std::optional<RationalSiso>& w3) {
  if (!w1 && !w2 && !w3) throw ConfigError("augmentation needs at least one weight");
  const int n = g.states();
  const int m = g.inputs();
  const int p = g.outputs();
  if (p <= 0 || m <= 0)
    throw DimensionError("plant must have at least one input and output to augment");

  std::optional<WeightBlock> b1, b2, b3;
  if (w1) b1 = replicate(*w1, p);
  if (w2) b2 = replicate(*w2, m);
  if (w3) b3 = replicate(*w3, p);
  const int n1 = b1 ? b1->nx : 0;
  const int n2 = b2 ? b2->nx : 0;
  const int n3 = b3 ? b3->nx : 0;
  const int nx = n + n1 + n2 + n3;
  const int nin = p + m;  // [w; u]
  const int nz = (b1 ? p : 0) + (b2 ? m : 0) + (b3 ? p : 0);
  const int nout = nz + p;

  const int o1 = n, o2 = n + n1, o3 = n + n1 + n2;  // state offsets
  Mat A = Mat::Zero(nx, nx);
  Mat B = Mat::Zero(nx, nin);
  Mat C = Mat::Zero(nout, nx);
  Mat D = Mat::Zero(nout, nin);

  A.topLeftCorner(n, n) = g.A();
  B.block(0, p, n, m) = g.B();

  // e = w - Cg x - Dg u feeds W1 and y; y_g = Cg x + Dg u feeds W3.
  if (b1) {
    A.block(o1, 0, n1, n) = -b1->B * g.C();
    A.block(o1, o1, n1, n1) = b1->A;
    B.block(o1, 0, n1, p) = b1->B;
    B.block(o1, p, n1, m) = -b1->B * g.D();
  }
  if (b2) {
    A.block(o2, o2, n2, n2) = b2->A;
    B.block(o2, p, n2, m) = b2->B;
  }
  if (b3) {
    A.block(o3, 0, n3, n) = b3->B * g.C();
    A.block(o3, o3, n3, n3) = b3->A;
    B.block(o3, p, n3, m) = b3->B * g.D();
  }

  int row = 0;
  if (b1) {
    C.block(row, 0, p, n) = -b1->D * g.C();
    C.block(row, o1, p, n1) = b1->C;
    D.block(row, 0, p, p) = b1->D;
    D.block(row, p, p, m) = -b1->D * g.D();
    row += p;
  }
  if (b2) {
    C.block(row, o2, m, n2) = b2->C;
    D.block(row, p, m, m) = b2->D;
    row += m;
  }
  if (b3) {
    C.block(row, 0, p, n) = b3->D * g.C();
    C.block(row, o3, p, n3) = b3->C;
    D.block(row, p, p, m) = b3->D * g.D();
    row += p;
  }
  C.block(row, 0, p, n) = -g.C();
  D.block(row, 0, p, p).setIdentity();
  D.block(row, p, p, m) = -g.D();

  return StateSpaceModel(std::move(A), std::move(B), std::move(C), std::move(D),
                         Partition{p, m});
}

StateSpaceModel close_loop(const StateSpaceModel& p, const StateSpaceModel& k) {
  if (!p.partition()) throw ConfigError("close_loop needs a partitioned plant");
  const int ny = p.nmeas();
  const int nu = p.ncont();
  if (k.inputs() != ny || k.outputs() != nu)
    throw DimensionError("controller is " + std::to_string(k.outputs()) + "x" +
                         std::to_string(k.inputs()) + ", partition expects " +
                         std::to_string(nu) + "x" + std::to_string(ny));
  const int n = p.states();
  const int nk = k.states();
  const int nw = p.inputs() - nu;
  const int nz = p.outputs() - ny;

  const Mat B1 = p.B1(), B2 = p.B2(), C1 = p.C1(), C2 = p.C2();
  const Mat D11 = p.D11(), D12 = p.D12(), D21 = p.D21(), D22 = p.D22();
  const Mat& Ak = k.A();
  const Mat& Bk = k.B();
  const Mat& Ck = k.C();
  const Mat& Dk = k.D();

  Eigen::FullPivLU<Mat> lu(Mat::Identity(nu, nu) - Dk * D22);
  if (!lu.isInvertible()) throw AlgebraicLoopError("I - Dk*D22 is singular");
  const Mat M = lu.inverse();
  const Mat N = Mat::Identity(ny, ny) + D22 * M * Dk;  // (I - D22*Dk)^{-1}

  Mat A(n + nk, n + nk);
  A.topLeftCorner(n, n) = p.A() + B2 * M * Dk * C2;
  A.topRightCorner(n, nk) = B2 * M * Ck;
  A.bottomLeftCorner(nk, n) = Bk * N * C2;
  A.bottomRightCorner(nk, nk) = Ak + Bk * N * D22 * Ck;

  Mat B(n + nk, nw);
  B.topRows(n) = B1 + B2 * M * Dk * D21;
  B.bottomRows(nk) = Bk * N * D21;

  Mat C(nz, n + nk);
  C.leftCols(n) = C1 + D12 * M * Dk * C2;
  C.rightCols(nk) = D12 * M * Ck;

  Mat D = D11 + D12 * M * Dk * D21;

  return StateSpaceModel(std::move(A), std::move(B), std::move(C), std::move(D));
}

StateSpaceModel sensitivity_loop(const StateSpaceModel& g, const StateSpaceModel& k) {
  return close_loop(augw(g, RationalSiso::constant(1.0), std::nullopt, std::nullopt), k);
}

StateSpaceModel complementary_loop(const StateSpaceModel& g, const StateSpaceModel& k) {
  const StateSpaceModel s = sensitivity_loop(g, k);
  const int q = s.outputs();
  return StateSpaceModel(s.A(), s.B(), -s.C(), Mat::Identity(q, q) - s.D());
}

}  // namespace fixorder
