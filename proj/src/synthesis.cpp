#include "fixorder/synthesis.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

#include "fixorder/analysis.hpp"
#include "fixorder/interconnect.hpp"

namespace fixorder {

ControllerParams ControllerParams::zero(int order, int ny, int nu) {
  if (order < 0 || ny <= 0 || nu <= 0)
    throw ConfigError("controller needs order >= 0 and positive channel counts");
  ControllerParams k;
  k.order = order;
  k.ny = ny;
  k.nu = nu;
  k.Ak = Mat::Zero(order, order);
  k.Bk = Mat::Zero(order, ny);
  k.Ck = Mat::Zero(nu, order);
  k.Dk = Mat::Zero(nu, ny);
  return k;
}

ControllerParams ControllerParams::from_theta(const Vec& theta, int order, int ny, int nu) {
  ControllerParams k = zero(order, ny, nu);
  if (theta.size() != k.dim())
    throw DimensionError("parameter vector has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(k.dim()));
  Eigen::Index off = 0;
  auto take = [&](Mat& block) {
    block = Eigen::Map<const Mat>(theta.data() + off, block.rows(), block.cols());
    off += block.size();
  };
  take(k.Ak);
  take(k.Bk);
  take(k.Ck);
  take(k.Dk);
  return k;
}

Vec ControllerParams::to_theta() const {
  Vec theta(dim());
  Eigen::Index off = 0;
  auto put = [&](const Mat& block) {
    Eigen::Map<Vec>(theta.data() + off, block.size()) =
        Eigen::Map<const Vec>(block.data(), block.size());
    off += block.size();
  };
  put(Ak);
  put(Bk);
  put(Ck);
  put(Dk);
  return theta;
}

StateSpaceModel ControllerParams::to_model() const { return StateSpaceModel(Ak, Bk, Ck, Dk); }

ControllerParams controller_from_model(const StateSpaceModel& k) {
  ControllerParams out;
  out.order = k.states();
  out.ny = k.inputs();
  out.nu = k.outputs();
  out.Ak = k.A();
  out.Bk = k.B();
  out.Ck = k.C();
  out.Dk = k.D();
  return out;
}

ControllerParams controller_from_tf(const RationalSiso& k) {
  return controller_from_model(tf_to_ss(k));
}

std::string to_string(Objective obj) {
  switch (obj) {
    case Objective::stabilize_only: return "stabilize_only";
    case Objective::spectral_abscissa: return "spectral_abscissa";
    case Objective::hinf: return "hinf";
  }
  return "unknown";
}

Objective parse_objective(const std::string& text) {
  if (text == "stabilize_only" || text == "stabilize" || text == "+")
    return Objective::stabilize_only;
  if (text == "spectral_abscissa" || text == "abscissa" || text == "s")
    return Objective::spectral_abscissa;
  if (text == "hinf" || text == "h") return Objective::hinf;
  throw ConfigError("unknown objective '" + text +
                    "' (use stabilize_only, spectral_abscissa, or hinf)");
}

namespace {

// Gradient blocks shared by both objectives: with row functional r and column
// q of the active eigenvalue or singular value,
//   dF = Re(r dA_cl q + r dB_cl v + u^H dC_cl q + u^H dD_cl v)
// collapses onto the controller blocks through phi and psi.
struct GradSplit {
  CVec r_p, r_k, q_p, q_k;
};

Vec pack_blocks(const Mat& GA, const Mat& GB, const Mat& GC, const Mat& GD) {
  Vec g(GA.size() + GB.size() + GC.size() + GD.size());
  Eigen::Index off = 0;
  auto put = [&](const Mat& block) {
    Eigen::Map<Vec>(g.data() + off, block.size()) =
        Eigen::Map<const Vec>(block.data(), block.size());
    off += block.size();
  };
  put(GA);
  put(GB);
  put(GC);
  put(GD);
  return g;
}

Vec controller_gradient(const GradSplit& s, const CVec& phi, const CVec& psi) {
  const Mat GA = (s.r_k * s.q_k.transpose()).real();
  const Mat GB = (s.r_k * psi.transpose()).real();
  const Mat GC = (phi * s.q_k.transpose()).real();
  const Mat GD = (phi * psi.transpose()).real();
  return pack_blocks(GA, GB, GC, GD);
}

struct AbscissaGrad {
  double alpha = 0.0;
  Vec g;
  bool reliable = true;
};

// Gradient of the spectral abscissa through the eigenvalue attaining it.
// Tie-break within 1e-9 of the max: largest |Im|, then largest index.
AbscissaGrad abscissa_gradient(const StateSpaceModel& p, const StateSpaceModel& cl, int order) {
  const int n = p.states();
  auto [alpha, eig] = spectral_abscissa(cl);

  Eigen::Index sel = 0;
  double best_im = -1.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i).real() < alpha - 1e-9) continue;
    const double im = std::abs(eig.values(i).imag());
    if (im >= best_im) {
      best_im = im;
      sel = i;
    }
  }

  const CVec x = eig.right.col(sel);
  const CVec y = eig.left.col(sel);
  const Complex s = y.dot(x);  // y^H x
  AbscissaGrad out;
  out.alpha = alpha;
  out.reliable = std::abs(s) > 1e-8 * x.norm() * y.norm();

  const CVec r = y.conjugate() / s;  // entries of the row functional y^H / (y^H x)
  GradSplit split{r.head(n), r.tail(order), x.head(n), x.tail(order)};
  const CVec phi = p.B2().transpose().cast<Complex>() * split.r_p;
  const CVec psi = p.C2().cast<Complex>() * split.q_p;
  out.g = controller_gradient(split, phi, psi);
  return out;
}

}  // namespace

ObjectiveEval objective_eval(const StateSpaceModel& p, const ControllerParams& params,
                             Objective objective, double penalty_barrier, double hinf_tol) {
  const int ny = p.nmeas();
  const int nu = p.ncont();
  if (params.ny != ny || params.nu != nu)
    throw DimensionError("controller channels (" + std::to_string(params.ny) + ", " +
                         std::to_string(params.nu) + ") do not match the plant partition (" +
                         std::to_string(ny) + ", " + std::to_string(nu) + ")");
  if (p.D22().size() > 0 && p.D22().cwiseAbs().maxCoeff() != 0.0)
    throw ConfigError("objective gradients assume D22 = 0; absorb the control feedthrough first");

  const StateSpaceModel cl = close_loop(p, params.to_model());
  const int n = p.states();
  const int k = params.order;

  ObjectiveEval out;
  if (objective != Objective::hinf) {
    AbscissaGrad ag = abscissa_gradient(p, cl, k);
    out.f = ag.alpha;
    out.g = std::move(ag.g);
    out.alpha = ag.alpha;
    out.stable = ag.alpha < 0.0;
    out.grad_reliable = ag.reliable;
    return out;
  }

  const double alpha = spectral_abscissa_value(cl.A());
  out.alpha = alpha;
  if (alpha >= 0.0) {
    // Penalized-abscissa fallback: finite, pulls back toward stability.
    AbscissaGrad ag = abscissa_gradient(p, cl, k);
    const Vec theta = params.to_theta();
    out.f = ag.alpha + penalty_barrier * theta.squaredNorm();
    out.g = ag.g + 2.0 * penalty_barrier * theta;
    out.stable = false;
    out.grad_reliable = ag.reliable;
    return out;
  }

  out.stable = true;
  const HinfResult hr = hinf_norm(cl, hinf_tol);
  out.f = hr.norm;
  const int p1 = cl.outputs();
  const int m1 = cl.inputs();
  if (p1 == 0 || m1 == 0 || hr.norm == 0.0) {
    out.g = Vec::Zero(params.dim());
    return out;
  }

  // Leading singular pair of T(j w*); the peak is stationary in omega, so the
  // theta-gradient is the partial at fixed w*.
  CMat Mw = (-cl.A()).cast<Complex>();
  Mw.diagonal().array() += Complex(0.0, hr.peak_frequency);
  Eigen::PartialPivLU<CMat> lu(Mw);
  const CMat PhiB = lu.solve(cl.B().cast<Complex>());
  const CMat T = cl.C().cast<Complex>() * PhiB + cl.D().cast<Complex>();
  Eigen::JacobiSVD<CMat> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CVec u = svd.matrixU().col(0);
  const CVec v = svd.matrixV().col(0);
  const Vec& sv = svd.singularValues();
  out.grad_reliable = sv.size() < 2 || (sv(0) - sv(1)) > 1e-9 * (1.0 + sv(0));

  const CVec q = PhiB * v;
  Eigen::PartialPivLU<CMat> luT(Mw.transpose());
  const CVec r = luT.solve(cl.C().transpose().cast<Complex>() * u.conjugate());

  GradSplit split{r.head(n), r.tail(k), q.head(n), q.tail(k)};
  const CVec phi =
      p.B2().transpose().cast<Complex>() * split.r_p + p.D12().transpose().cast<Complex>() * u.conjugate();
  const CVec psi = p.C2().cast<Complex>() * split.q_p + p.D21().cast<Complex>() * v;
  out.g = controller_gradient(split, phi, psi);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double normal_draw(std::mt19937_64& g) {
  const double u1 = (static_cast<double>(g() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
  const double u2 = static_cast<double>(g() >> 11) * 0x1p-53;          // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct StartOutcome {
  StartTrace trace;
  Vec final_theta;
  double final_alpha = std::numeric_limits<double>::infinity();
  std::exception_ptr error;
};

EvalPoint rejected_point(int dim) {
  EvalPoint pt;
  pt.g = Vec::Zero(dim);
  pt.acceptable = false;
  pt.grad_reliable = false;
  return pt;
}

StartOutcome run_start(const StateSpaceModel& p, int order, const SynthesisOptions& opts,
                       int index) {
  StartOutcome out;
  out.trace.start_index = index;
  try {
    const int ny = p.nmeas();
    const int nu = p.ncont();
    const int dim = ControllerParams::zero(order, ny, nu).dim();

    std::mt19937_64 rng(splitmix64(opts.rng_seed + 0x9e3779b97f4a7c15ull *
                                                       (static_cast<std::uint64_t>(index) + 1)));
    Vec theta0(dim);
    if (opts.warm_start) {
      const Vec w = opts.warm_start->to_theta();
      if (index == 0)
        theta0 = w;
      else
        for (Eigen::Index j = 0; j < dim; ++j) theta0(j) = w(j) * (1.0 + 0.1 * normal_draw(rng));
    } else {
      for (Eigen::Index j = 0; j < dim; ++j) theta0(j) = opts.init_scale * normal_draw(rng);
    }

    auto eval_with = [&](const Vec& th, Objective obj) -> EvalPoint {
      try {
        ObjectiveEval e = objective_eval(p, ControllerParams::from_theta(th, order, ny, nu), obj,
                                         opts.penalty_barrier);
        EvalPoint pt;
        pt.f = e.f;
        pt.g = std::move(e.g);
        pt.acceptable = obj != Objective::hinf || e.stable;
        pt.grad_reliable = e.grad_reliable;
        return pt;
      } catch (const NumericalError&) {
        return rejected_point(dim);
      }
    };
    auto eval_abscissa = [&](const Vec& th) {
      return eval_with(th, Objective::spectral_abscissa);
    };
    auto eval_requested = [&](const Vec& th) { return eval_with(th, opts.objective); };

    Vec x = theta0;
    int iters = 0;
    double alpha_now = eval_abscissa(theta0).f;
    Termination reason = Termination::stabilized_and_quit;

    if (!(alpha_now < 0.0)) {
      BfgsOptions ph1;
      ph1.max_iters = opts.max_iters_per_start;
      ph1.grad_tol = opts.grad_tol;
      ph1.stop_below = -opts.penalty_barrier;
      BfgsOutcome o1 = bfgs_nonsmooth(eval_abscissa, theta0, ph1);
      x = std::move(o1.x);
      iters += o1.iterations;
      alpha_now = o1.f;
      reason = o1.reason;
    }

    out.final_theta = x;
    out.final_alpha = alpha_now;
    out.trace.theta_norm = x.norm();
    out.trace.iterations = iters;
    if (!(alpha_now < 0.0)) {  // start never stabilized; discarded from aggregation
      out.trace.final_value = alpha_now;
      out.trace.reason = reason;
      return out;
    }
    out.trace.stabilized = true;

    if (opts.objective == Objective::stabilize_only) {
      out.trace.final_value = alpha_now;
      out.trace.reason = reason;
      return out;
    }

    BfgsOptions ph2;
    ph2.max_iters = opts.max_iters_per_start;
    ph2.grad_tol = opts.grad_tol;
    BfgsOutcome o2 = bfgs_nonsmooth(eval_requested, x, ph2);
    out.final_theta = std::move(o2.x);
    out.trace.final_value = o2.f;
    out.trace.iterations = iters + o2.iterations;
    out.trace.reason = o2.reason;
    out.trace.theta_norm = out.final_theta.norm();
    out.final_alpha = opts.objective == Objective::spectral_abscissa
                          ? o2.f
                          : spectral_abscissa_value(
                                close_loop(p, ControllerParams::from_theta(out.final_theta, order,
                                                                           ny, nu)
                                                  .to_model())
                                    .A());
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

}  // namespace

SynthesisResult synthesize(const StateSpaceModel& p, int order, const SynthesisOptions& opts) {
  if (order < 0) throw ConfigError("controller order must be nonnegative");
  if (opts.n_starts < 1) throw ConfigError("need at least one start");
  if (opts.max_iters_per_start < 1) throw ConfigError("iteration budget must be positive");
  if (!(opts.grad_tol > 0.0) || !(opts.init_scale > 0.0) || !(opts.penalty_barrier > 0.0))
    throw ConfigError("tolerances must be positive");
  const int ny = p.nmeas();
  const int nu = p.ncont();
  if (p.D22().size() > 0 && p.D22().cwiseAbs().maxCoeff() != 0.0)
    throw ConfigError("synthesis assumes D22 = 0; absorb the control feedthrough first");
  if (opts.warm_start &&
      (opts.warm_start->order != order || opts.warm_start->ny != ny || opts.warm_start->nu != nu))
    throw DimensionError("warm start dimensions do not match the requested synthesis");

  std::vector<StartOutcome> outs(static_cast<std::size_t>(opts.n_starts));
  int executed = opts.n_starts;
  if (opts.objective == Objective::stabilize_only) {
    // Sequential scan; the whole run stops at the first stabilizing start.
    for (int i = 0; i < opts.n_starts; ++i) {
      outs[static_cast<std::size_t>(i)] = run_start(p, order, opts, i);
      if (outs[static_cast<std::size_t>(i)].error)
        std::rethrow_exception(outs[static_cast<std::size_t>(i)].error);
      if (outs[static_cast<std::size_t>(i)].trace.stabilized) {
        executed = i + 1;
        break;
      }
    }
  } else {
    const int n_starts = opts.n_starts;
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
    for (int i = 0; i < n_starts; ++i)
      outs[static_cast<std::size_t>(i)] = run_start(p, order, opts, i);
    for (int i = 0; i < n_starts; ++i)
      if (outs[static_cast<std::size_t>(i)].error)
        std::rethrow_exception(outs[static_cast<std::size_t>(i)].error);
  }

  SynthesisResult res;
  res.per_start.reserve(static_cast<std::size_t>(executed));
  int best = -1;
  int least_unstable = 0;
  for (int i = 0; i < executed; ++i) {
    const StartOutcome& o = outs[static_cast<std::size_t>(i)];
    res.per_start.push_back(o.trace);
    if (o.trace.stabilized &&
        (best < 0 || o.trace.final_value < outs[static_cast<std::size_t>(best)].trace.final_value))
      best = i;
    if (o.final_alpha < outs[static_cast<std::size_t>(least_unstable)].final_alpha)
      least_unstable = i;
  }

  if (best < 0) {
    const StartOutcome& o = outs[static_cast<std::size_t>(least_unstable)];
    ControllerParams k = o.final_theta.size() > 0
                             ? ControllerParams::from_theta(o.final_theta, order, ny, nu)
                             : ControllerParams::zero(order, ny, nu);
    throw StabilizationFailure(std::move(k), o.final_alpha);
  }

  const StartOutcome& win = outs[static_cast<std::size_t>(best)];
  res.best = ControllerParams::from_theta(win.final_theta, order, ny, nu);
  res.value = win.trace.final_value;
  res.alpha = win.final_alpha;
  res.stabilized = true;
  res.best_start = best;
  return res;
}

SynthesisResult refine(const StateSpaceModel& p, int order, const SynthesisResult& prev,
                       const SynthesisOptions& opts) {
  if (prev.best.order != order || prev.best.ny != p.nmeas() || prev.best.nu != p.ncont())
    throw DimensionError("previous result does not match the requested refinement");
  SynthesisOptions warm = opts;
  warm.warm_start = prev.best;
  SynthesisResult res = synthesize(p, order, warm);
  if (!(res.value <= prev.value + 1e-12)) {
    // The warm start itself was already evaluated, so regression can only come
    // from objective noise; keep the previous point in that case.
    res.best = prev.best;
    res.value = prev.value;
    res.alpha = prev.alpha;
    res.best_start = -1;
  }
  return res;
}

}  // namespace fixorder
