#include "fixorder/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "fixorder/errors.hpp"

namespace fixorder {

EigTriple eig_triple(const Mat& A) {
  if (A.rows() != A.cols()) throw DimensionError("eigen-decomposition needs a square matrix");
  const Eigen::Index n = A.rows();
  EigTriple out;
  if (n == 0) {
    out.values = CVec(0);
    out.right = CMat(0, 0);
    out.left = CMat(0, 0);
    return out;
  }
  Eigen::EigenSolver<Mat> right(A, true);
  if (right.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
  Eigen::EigenSolver<Mat> left(A.transpose(), true);
  if (left.info() != Eigen::Success) throw NumericalError("transpose eigenvalue iteration failed");

  out.values = right.eigenvalues();
  out.right = right.eigenvectors();
  out.left = CMat(n, n);
  // yᴴA = λyᴴ ⟺ Aᵀy = λ̄y: pair each eigenvalue with the transpose-problem
  // eigenvalue nearest its conjugate.
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex target = std::conj(out.values(i));
    Eigen::Index pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double dist = std::abs(left.eigenvalues()(j) - target);
      if (dist < best) {
        best = dist;
        pick = j;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    out.left.col(i) = left.eigenvectors().col(pick);
  }
  return out;
}

double spectral_abscissa_value(const Mat& A) {
  if (A.rows() != A.cols()) throw DimensionError("spectral abscissa needs a square matrix");
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Mat> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
  return es.eigenvalues().real().maxCoeff();
}

std::pair<double, EigTriple> spectral_abscissa(const StateSpaceModel& sys) {
  EigTriple eig = eig_triple(sys.A());
  double alpha = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    alpha = std::max(alpha, eig.values(i).real());
  return {alpha, std::move(eig)};
}

namespace {

// σmax of the frequency response at one frequency.
double sigma_point(const StateSpaceModel& sys, double w) {
  if (sys.inputs() == 0 || sys.outputs() == 0) return 0.0;
  const CMat T = sys.eval(Complex(0.0, w));
  return Eigen::JacobiSVD<CMat>(T).singularValues()(0);
}

// Diagonal state scaling equalizing row and column weight of the (A, B, C)
// triple. Powers of two keep every entry scaling exact, so the transfer
// function is unchanged while the Hamiltonian axis test, whose tolerance
// scales with the matrix norm, sees a realization without wild magnitude
// spread (a canonical form of k(s) with a far pole can put 1e9 next to 1).
StateSpaceModel balanced_realization(const StateSpaceModel& sys) {
  const int n = sys.states();
  Mat A = sys.A();
  Mat B = sys.B();
  Mat C = sys.C();
  bool changed = true;
  for (int sweep = 0; sweep < 30 && changed; ++sweep) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double c = C.col(i).cwiseAbs().sum();
      double r = B.row(i).cwiseAbs().sum();
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        c += std::abs(A(k, i));
        r += std::abs(A(i, k));
      }
      if (!(c > 0.0) || !(r > 0.0)) continue;
      const double e = std::round(0.5 * std::log2(r / c));
      if (e == 0.0) continue;
      const double f = std::exp2(std::min(std::max(e, -512.0), 512.0));
      if (c * f + r / f >= 0.95 * (c + r)) continue;
      A.col(i) *= f;
      A.row(i) /= f;
      B.row(i) /= f;
      C.col(i) *= f;
      changed = true;
    }
  }
  return StateSpaceModel(A, B, C, sys.D());
}

// Parlett-Reinsch balancing with powers of two; a diagonal similarity, so the
// spectrum is untouched while the real-part noise of computed eigenvalues,
// which scales with the matrix norm, shrinks with the magnitude spread.
void balance_in_place(Mat& M) {
  const int n = static_cast<int>(M.rows());
  bool changed = true;
  for (int sweep = 0; sweep < 30 && changed; ++sweep) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        c += std::abs(M(k, i));
        r += std::abs(M(i, k));
      }
      if (!(c > 0.0) || !(r > 0.0)) continue;
      const double e = std::round(0.5 * std::log2(r / c));
      if (e == 0.0) continue;
      const double f = std::exp2(std::min(std::max(e, -512.0), 512.0));
      if (c * f + r / f >= 0.95 * (c + r)) continue;
      M.col(i) *= f;
      M.row(i) /= f;
      changed = true;
    }
  }
}

struct AxisScan {
  bool crossed = false;
  std::vector<double> omegas;  // |Im λ| of near-axis eigenvalues, sorted
};

// Imaginary-axis eigenvalue test of the Hamiltonian H(γ); crossing ⟺ γ is a
// singular value of the response at some frequency ⟺ the level is not
// certified.
AxisScan hamiltonian_axis_scan(const StateSpaceModel& sys, double gamma) {
  const int n = sys.states();
  const Mat& A = sys.A();
  const Mat& B = sys.B();
  const Mat& C = sys.C();
  const Mat& D = sys.D();
  const int m = sys.inputs();

  const Mat R = gamma * gamma * Mat::Identity(m, m) - D.transpose() * D;
  Eigen::LLT<Mat> llt(R);
  AxisScan scan;
  if (llt.info() != Eigen::Success) {
    scan.crossed = true;  // γ at or below the σmax(D) floor
    return scan;
  }
  const Mat RinvDtC = llt.solve(D.transpose() * C);
  const Mat M11 = A + B * RinvDtC;
  Mat H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = M11;
  H.topRightCorner(n, n) = B * llt.solve(B.transpose());
  H.bottomLeftCorner(n, n) = -C.transpose() * (C + D * RinvDtC);
  H.bottomRightCorner(n, n) = -M11.transpose();

  balance_in_place(H);
  Eigen::EigenSolver<Mat> es(H, false);
  if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigenvalue iteration failed");
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) <= 1e-8 * (1.0 + std::abs(lam.imag()))) {
      scan.crossed = true;
      scan.omegas.push_back(std::abs(lam.imag()));
    }
  }
  std::sort(scan.omegas.begin(), scan.omegas.end());
  scan.omegas.erase(std::unique(scan.omegas.begin(), scan.omegas.end(),
                                [](double a, double b) { return b - a <= 1e-9 * (1.0 + b); }),
                    scan.omegas.end());
  return scan;
}

struct PeakTracker {
  double w = 0.0;
  double value = -1.0;

  void consider(double omega, double v) {
    if (v > value) {
      value = v;
      w = omega;
    }
  }
};

// Golden-section maximization of σmax over [a, b], folding every evaluation
// into the tracker.
void golden_max(const StateSpaceModel& sys, double a, double b, PeakTracker& peak) {
  if (!(b > a)) {
    peak.consider(a, sigma_point(sys, a));
    return;
  }
  constexpr double kGolden = 0.6180339887498949;
  auto eval = [&](double w) {
    const double v = sigma_point(sys, w);
    peak.consider(w, v);
    return v;
  };
  eval(a);
  eval(b);
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * (1.0 + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = eval(d);
    }
  }
}

double sigma_max_of_D(const Mat& D) {
  if (D.rows() == 0 || D.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(D).singularValues()(0);
}

}  // namespace

bool hinf_level_certified(const StateSpaceModel& sys, double gamma) {
  if (spectral_abscissa_value(sys.A()) >= 0.0)
    throw ConfigError("level certification needs a stable system");
  if (gamma <= sigma_max_of_D(sys.D()))
    throw ConfigError("level must exceed the feedthrough floor sigma_max(D)");
  return !hamiltonian_axis_scan(balanced_realization(sys), gamma).crossed;
}

HinfResult hinf_norm(const StateSpaceModel& sys, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (sys.inputs() == 0 || sys.outputs() == 0) return {0.0, 0.0, true};
  const double sigD = sigma_max_of_D(sys.D());
  const int n = sys.states();
  if (n == 0) return {sigD, 0.0, true};

  Eigen::EigenSolver<Mat> es(sys.A(), false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
  const CVec lams = es.eigenvalues();
  if (lams.real().maxCoeff() >= 0.0)
    return {std::numeric_limits<double>::infinity(), 0.0, true};
  const StateSpaceModel bal = balanced_realization(sys);

  // Probe sweep for the lower bound: DC, eigenvalue magnitudes and damped
  // frequencies, a wide log grid, and a far-out point for the D-dominated tail.
  double minabs = std::numeric_limits<double>::infinity();
  double maxabs = 0.0;
  std::vector<double> probes{0.0};
  for (Eigen::Index i = 0; i < lams.size(); ++i) {
    const double mag = std::abs(lams(i));
    minabs = std::min(minabs, mag);
    maxabs = std::max(maxabs, mag);
    probes.push_back(mag);
    if (std::abs(lams(i).imag()) > 1e-12) probes.push_back(std::abs(lams(i).imag()));
  }
  for (double w : log_grid(1e-4 * minabs, 1e4 * maxabs, 25)) probes.push_back(w);
  const double whuge = 1e8 * std::max(1.0, maxabs);
  probes.push_back(whuge);

  double lb = 0.0;
  double wbest = 0.0;
  for (double w : probes) {
    const double v = sigma_point(bal, w);
    if (v > lb) {
      lb = v;
      wbest = w;
    }
  }
  if (sigD > lb) {
    lb = sigD;
    wbest = whuge;
  }
  if (lb <= 1e-300) return {0.0, 0.0, true};

  // Grow the upper bound until the Hamiltonian certifies it; a failing level
  // is a valid lower bound and its crossings locate the peak.
  std::vector<double> candidates{wbest};
  double ub = 2.0 * lb;
  {
    int grow = 0;
    for (; grow < 300; ++grow) {
      const AxisScan scan = hamiltonian_axis_scan(bal, ub);
      if (!scan.crossed) break;
      lb = ub;
      if (!scan.omegas.empty()) candidates = scan.omegas;
      ub *= 2.0;
    }
    if (grow == 300) throw NumericalError("H-infinity upper bound growth did not certify");
  }

  int iters = 0;
  for (; iters < 300 && (ub - lb) > tol * lb; ++iters) {
    const double gamma = 0.5 * (lb + ub);
    if (gamma <= sigD * (1.0 + 1e-12)) break;  // cannot test below the D floor
    const AxisScan scan = hamiltonian_axis_scan(bal, gamma);
    if (scan.crossed) {
      lb = gamma;
      if (!scan.omegas.empty()) candidates = scan.omegas;
    } else {
      ub = gamma;
    }
  }
  if (iters == 300)
    throw NumericalError("H-infinity bisection did not converge; bracket [" +
                         std::to_string(lb) + ", " + std::to_string(ub) + "]");

  // Refine the peak: between consecutive level crossings and around isolated
  // candidates, then report σmax at the refined frequency.
  std::sort(candidates.begin(), candidates.end());
  PeakTracker peak;
  peak.consider(wbest, sigma_point(bal, wbest));
  const double wlo = 1e-4 * minabs;
  for (std::size_t i = 0; i + 1 < candidates.size(); ++i)
    golden_max(bal, candidates[i], candidates[i + 1], peak);
  for (double c : candidates) {
    if (c > 0.0)
      golden_max(bal, 0.5 * c, 2.0 * c, peak);
    else
      golden_max(bal, 0.0, wlo, peak);
  }
  if (wbest > 0.0)
    golden_max(bal, 0.5 * wbest, 2.0 * wbest, peak);
  else
    golden_max(bal, 0.0, wlo, peak);

  double norm = peak.value;
  double wpeak = peak.w;
  if (sigD > norm) {
    norm = sigD;
    wpeak = whuge;
  }
  return {norm, wpeak, true};
}

namespace {

Mat sigma_impl(const StateSpaceModel& sys, const std::vector<double>& freqs, bool parallel) {
  for (double w : freqs)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ConfigError("frequencies must be nonnegative and finite");
  if (sys.states() > 0) {
    Eigen::EigenSolver<Mat> es(sys.A(), false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
    for (double w : freqs)
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(Complex(0.0, w) - es.eigenvalues()(i)) < 1e-12)
          throw SingularFrequencyError("response is singular at omega = " + std::to_string(w));
  }
  const auto nfr = static_cast<Eigen::Index>(freqs.size());
  const Eigen::Index k = std::min(sys.outputs(), sys.inputs());
  Mat out(nfr, k);
  if (k == 0) return out;
  auto fill_row = [&](Eigen::Index i) {
    const CMat T = sys.eval(Complex(0.0, freqs[static_cast<std::size_t>(i)]));
    out.row(i) = Eigen::JacobiSVD<CMat>(T).singularValues().transpose();
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < nfr; ++i) fill_row(i);
  } else {
    for (Eigen::Index i = 0; i < nfr; ++i) fill_row(i);
  }
  return out;
}

}  // namespace

Mat sigma(const StateSpaceModel& sys, const std::vector<double>& freqs) {
  return sigma_impl(sys, freqs, true);
}

Mat sigma_serial(const StateSpaceModel& sys, const std::vector<double>& freqs) {
  return sigma_impl(sys, freqs, false);
}

std::vector<double> log_grid(double wmin, double wmax, int points) {
  if (!(wmin > 0.0) || !(wmax >= wmin)) throw ConfigError("need 0 < wmin <= wmax");
  if (points < 1) throw ConfigError("need at least one grid point");
  if (points == 1) return {wmin};
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = std::log(wmax / wmin) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = wmin * std::exp(step * i);
  out.back() = wmax;
  return out;
}

StepResponse step_response(const StateSpaceModel& sys, double t_final, int n_points) {
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (n_points < 2) throw ConfigError("need at least two samples");
  const int n = sys.states();
  const int m = sys.inputs();
  const double dt = t_final / (n_points - 1);

  // Exact ZOH step: exp of the augmented [[A, B], [0, 0]] times dt.
  Mat aug = Mat::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = sys.A();
  aug.topRightCorner(n, m) = sys.B();
  const Mat E = (aug * dt).exp();
  const Mat Ad = E.topLeftCorner(n, n);
  const Mat Bd = E.topRightCorner(n, m);

  StepResponse resp;
  resp.t.reserve(static_cast<std::size_t>(n_points));
  resp.y.reserve(static_cast<std::size_t>(n_points));
  Mat X = Mat::Zero(n, m);  // column j: state under a unit step on input j
  for (int k = 0; k < n_points; ++k) {
    resp.t.push_back(k * dt);
    Mat y = sys.C() * X + sys.D();
    if (!y.allFinite())
      throw NumericalError("step response overflowed at t = " + std::to_string(k * dt));
    resp.y.push_back(std::move(y));
    X = Ad * X + Bd;
  }
  return resp;
}

Mat dc_gain(const StateSpaceModel& sys) {
  if (sys.states() == 0) return sys.D();
  Eigen::FullPivLU<Mat> lu(sys.A());
  if (!lu.isInvertible()) throw NumericalError("DC gain undefined: A is singular");
  return sys.D() - sys.C() * lu.solve(sys.B());
}

}  // namespace fixorder
