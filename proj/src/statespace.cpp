#include "fixorder/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fixorder/errors.hpp"

namespace fixorder {

StateSpaceModel::StateSpaceModel()
    : A_(0, 0), B_(0, 0), C_(0, 0), D_(0, 0) {}

StateSpaceModel::StateSpaceModel(Mat A, Mat B, Mat C, Mat D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  validate();
}

StateSpaceModel::StateSpaceModel(Mat A, Mat B, Mat C, Mat D, Partition partition)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)),
      partition_(partition) {
  validate();
}

void StateSpaceModel::validate() const {
  if (A_.rows() != A_.cols())
    throw DimensionError("A must be square, got " + std::to_string(A_.rows()) + "x" +
                         std::to_string(A_.cols()));
  if (B_.rows() != A_.rows())
    throw DimensionError("B has " + std::to_string(B_.rows()) + " rows, expected " +
                         std::to_string(A_.rows()));
  if (C_.cols() != A_.cols())
    throw DimensionError("C has " + std::to_string(C_.cols()) + " columns, expected " +
                         std::to_string(A_.cols()));
  if (D_.rows() != C_.rows() || D_.cols() != B_.cols())
    throw DimensionError("D must be " + std::to_string(C_.rows()) + "x" +
                         std::to_string(B_.cols()) + ", got " + std::to_string(D_.rows()) +
                         "x" + std::to_string(D_.cols()));
  if (partition_) {
    if (partition_->nmeas <= 0 || partition_->nmeas > outputs())
      throw DimensionError("partition nmeas = " + std::to_string(partition_->nmeas) +
                           " outside (0, " + std::to_string(outputs()) + "]");
    if (partition_->ncont <= 0 || partition_->ncont > inputs())
      throw DimensionError("partition ncont = " + std::to_string(partition_->ncont) +
                           " outside (0, " + std::to_string(inputs()) + "]");
  }
}

namespace {

const Partition& require_partition(const std::optional<Partition>& p) {
  if (!p) throw ConfigError("model has no TITO partition");
  return *p;
}

}  // namespace

int StateSpaceModel::nmeas() const { return require_partition(partition_).nmeas; }
int StateSpaceModel::ncont() const { return require_partition(partition_).ncont; }

Mat StateSpaceModel::B1() const { return B_.leftCols(inputs() - ncont()); }
Mat StateSpaceModel::B2() const { return B_.rightCols(ncont()); }
Mat StateSpaceModel::C1() const { return C_.topRows(outputs() - nmeas()); }
Mat StateSpaceModel::C2() const { return C_.bottomRows(nmeas()); }
Mat StateSpaceModel::D11() const {
  return D_.topLeftCorner(outputs() - nmeas(), inputs() - ncont());
}
Mat StateSpaceModel::D12() const {
  return D_.topRightCorner(outputs() - nmeas(), ncont());
}
Mat StateSpaceModel::D21() const {
  return D_.bottomLeftCorner(nmeas(), inputs() - ncont());
}
Mat StateSpaceModel::D22() const { return D_.bottomRightCorner(nmeas(), ncont()); }

CMat StateSpaceModel::eval(Complex s) const {
  if (states() == 0) return D_.cast<Complex>();
  CMat M = (-A_).cast<Complex>();
  M.diagonal().array() += s;
  return C_.cast<Complex>() * M.partialPivLu().solve(B_.cast<Complex>()) + D_.cast<Complex>();
}

StateSpaceModel mktito(const StateSpaceModel& sys, int nmeas, int ncont) {
  if (nmeas <= 0 || nmeas > sys.outputs())
    throw DimensionError("nmeas = " + std::to_string(nmeas) + " exceeds output count " +
                         std::to_string(sys.outputs()));
  if (ncont <= 0 || ncont > sys.inputs())
    throw DimensionError("ncont = " + std::to_string(ncont) + " exceeds input count " +
                         std::to_string(sys.inputs()));
  return StateSpaceModel(sys.A(), sys.B(), sys.C(), sys.D(), Partition{nmeas, ncont});
}

StateSpaceModel tf_to_ss(const RationalSiso& g) {
  if (!g.proper())
    throw NonProperError("numerator degree " + std::to_string(g.num_degree()) +
                         " exceeds denominator degree " + std::to_string(g.den_degree()));
  const int n = g.den_degree();
  // Numerator padded to denominator length; leading entry is the feedthrough.
  std::vector<double> nn(static_cast<std::size_t>(n) + 1, 0.0);
  const std::size_t off = nn.size() - g.num().size();
  for (std::size_t i = 0; i < g.num().size(); ++i) nn[off + i] = g.num()[i];
  const double d = nn[0];

  Mat A = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) A(0, j) = -g.den()[static_cast<std::size_t>(j) + 1];
  for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
  Mat B = Mat::Zero(n, 1);
  if (n > 0) B(0, 0) = 1.0;
  Mat C(1, n);
  for (int j = 0; j < n; ++j)
    C(0, j) = nn[static_cast<std::size_t>(j) + 1] - d * g.den()[static_cast<std::size_t>(j) + 1];
  Mat D(1, 1);
  D(0, 0) = d;
  return StateSpaceModel(std::move(A), std::move(B), std::move(C), std::move(D));
}

namespace {

void check_channel(const StateSpaceModel& sys, int out, int in) {
  if (out < 0 || out >= sys.outputs())
    throw IndexError("output index " + std::to_string(out) + " outside [0, " +
                     std::to_string(sys.outputs()) + ")");
  if (in < 0 || in >= sys.inputs())
    throw IndexError("input index " + std::to_string(in) + " outside [0, " +
                     std::to_string(sys.inputs()) + ")");
}

}  // namespace

RationalSiso channel_tf(const StateSpaceModel& sys, int out, int in) {
  check_channel(sys, out, in);
  const int n = sys.states();
  const Mat& A = sys.A();
  const Vec b = sys.B().col(in);
  const Eigen::RowVectorXd c = sys.C().row(out);
  const double d = sys.D()(out, in);

  // Faddeev-LeVerrier: den = char poly of A, adj(sI-A) = sum R_{k-1} s^{n-k}.
  std::vector<double> den(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
  den[0] = 1.0;
  num[0] = d;
  Mat R = Mat::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    const double t = c * R * b;
    const Mat M = A * R;
    den[static_cast<std::size_t>(k)] = -M.trace() / k;
    R = M + den[static_cast<std::size_t>(k)] * Mat::Identity(n, n);
    num[static_cast<std::size_t>(k)] = t + d * den[static_cast<std::size_t>(k)];
  }
  return RationalSiso(std::move(num), std::move(den));
}

namespace {

CVec sorted_conjugate_order(CVec v) {
  std::vector<Complex> tmp(v.data(), v.data() + v.size());
  std::sort(tmp.begin(), tmp.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    return a.imag() < b.imag();
  });
  for (std::size_t i = 0; i < tmp.size(); ++i) v(static_cast<Eigen::Index>(i)) = tmp[i];
  return v;
}

}  // namespace

ZpkForm make_zpk(CVec zeros, CVec poles, double gain) {
  if (gain == 0.0) return ZpkForm{CVec(0), CVec(0), 0.0};
  ZpkForm z{sorted_conjugate_order(std::move(zeros)), sorted_conjugate_order(std::move(poles)),
            gain};
  poly_from_roots(z.zeros);  // enforce conjugate closure
  poly_from_roots(z.poles);
  return z;
}

RationalSiso ZpkForm::to_rational() const {
  if (gain == 0.0) return RationalSiso();
  return RationalSiso(poly_from_roots(zeros, gain), poly_from_roots(poles));
}

Complex ZpkForm::eval(Complex s) const {
  Complex out(gain, 0.0);
  for (Eigen::Index i = 0; i < zeros.size(); ++i) out *= s - zeros(i);
  for (Eigen::Index i = 0; i < poles.size(); ++i) out /= s - poles(i);
  return out;
}

ZpkForm ss_to_zpk(const StateSpaceModel& sys, int out, int in) {
  check_channel(sys, out, in);
  const int n = sys.states();
  const Vec b = sys.B().col(in);
  const Eigen::RowVectorXd c = sys.C().row(out);
  const double d = sys.D()(out, in);
  if ((b.norm() == 0.0 || c.norm() == 0.0) && d == 0.0) return ZpkForm{CVec(0), CVec(0), 0.0};

  std::vector<Complex> poles;
  if (n > 0) {
    Eigen::EigenSolver<Mat> es(sys.A(), false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
    for (Eigen::Index i = 0; i < n; ++i) poles.push_back(es.eigenvalues()(i));
  }

  // Finite generalized eigenvalues of the system pencil ([A b; c d], diag(I, 0)).
  std::vector<Complex> zeros;
  {
    Mat M(n + 1, n + 1);
    M.topLeftCorner(n, n) = sys.A();
    M.topRightCorner(n, 1) = b;
    M.bottomLeftCorner(1, n) = c;
    M(n, n) = d;
    Mat N = Mat::Zero(n + 1, n + 1);
    N.topLeftCorner(n, n).setIdentity();
    Eigen::GeneralizedEigenSolver<Mat> ges(M, N, false);
    if (ges.info() != Eigen::Success) throw NumericalError("pencil QZ iteration failed");
    for (Eigen::Index i = 0; i <= n; ++i) {
      const Complex alpha = ges.alphas()(i);
      const double beta = ges.betas()(i);
      if (std::abs(beta) > 1e-8 * (std::abs(alpha) + std::abs(beta))) zeros.push_back(alpha / beta);
    }
  }

  // Cancel coincident pole/zero pairs (hidden modes of the channel).
  for (auto zi = zeros.begin(); zi != zeros.end();) {
    auto nearest = poles.end();
    double best = std::numeric_limits<double>::infinity();
    for (auto pi = poles.begin(); pi != poles.end(); ++pi) {
      const double dist = std::abs(*pi - *zi);
      if (dist < best) {
        best = dist;
        nearest = pi;
      }
    }
    if (nearest != poles.end() && best <= 1e-6 * (1.0 + std::abs(*nearest))) {
      poles.erase(nearest);
      zi = zeros.erase(zi);
    } else {
      ++zi;
    }
  }

  double rad = 1.0;
  for (const Complex& p : poles) rad = std::max(rad, std::abs(p));
  for (const Complex& z : zeros) rad = std::max(rad, std::abs(z));
  const double s0 = 1.0 + 2.0 * rad;
  Complex scale(sys.eval(Complex(s0, 0.0))(out, in));
  for (const Complex& p : poles) scale *= Complex(s0, 0.0) - p;
  for (const Complex& z : zeros) scale /= Complex(s0, 0.0) - z;
  const double gain = scale.real();
  if (gain == 0.0 || std::abs(gain) < 1e-280) return ZpkForm{CVec(0), CVec(0), 0.0};

  CVec zv(static_cast<Eigen::Index>(zeros.size()));
  for (std::size_t i = 0; i < zeros.size(); ++i) zv(static_cast<Eigen::Index>(i)) = zeros[i];
  CVec pv(static_cast<Eigen::Index>(poles.size()));
  for (std::size_t i = 0; i < poles.size(); ++i) pv(static_cast<Eigen::Index>(i)) = poles[i];
  return make_zpk(std::move(zv), std::move(pv), gain);
}

}  // namespace fixorder
