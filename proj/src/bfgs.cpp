#include <cmath>
#include <limits>

#include "fixorder/errors.hpp"
#include "fixorder/synthesis.hpp"

namespace fixorder {

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::gradient_small: return "gradient_small";
    case Termination::linesearch_fail: return "linesearch_fail";
    case Termination::max_iters: return "max_iters";
    case Termination::stabilized_and_quit: return "stabilized_and_quit";
  }
  return "unknown";
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.5;
constexpr int kMaxBracket = 50;

struct LineSearchHit {
  bool ok = false;
  Vec x;
  EvalPoint pt;
};

// Weak-Wolfe bisection bracketing: Armijo failure (or an unacceptable or
// non-finite trial) shrinks from above, curvature failure grows from below.
// A trial whose gradient is unreliable is accepted once Armijo holds; the
// outer loop then stops at it.
LineSearchHit line_search(const std::function<EvalPoint(const Vec&)>& fn, const Vec& x,
                          const Vec& d, double f0, double gd) {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double t = 1.0;
  LineSearchHit hit;
  for (int i = 0; i < kMaxBracket; ++i) {
    Vec xt = x + t * d;
    EvalPoint pt = fn(xt);
    const bool armijo = std::isfinite(pt.f) && pt.acceptable && pt.f <= f0 + kArmijo * t * gd;
    if (!armijo) {
      hi = t;
    } else if (!pt.grad_reliable || pt.g.dot(d) >= kCurvature * gd) {
      hit.ok = true;
      hit.x = std::move(xt);
      hit.pt = std::move(pt);
      return hit;
    } else {
      lo = t;
    }
    t = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * t;
  }
  return hit;
}

}  // namespace

BfgsOutcome bfgs_nonsmooth(const std::function<EvalPoint(const Vec&)>& f_and_g, const Vec& x0,
                           const BfgsOptions& opts) {
  if (!(opts.grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (opts.max_iters < 0) throw ConfigError("max_iters must be nonnegative");

  BfgsOutcome out;
  out.x = x0;
  EvalPoint cur = f_and_g(x0);
  out.f = cur.f;
  out.g = cur.g;
  if (!std::isfinite(cur.f) || !cur.acceptable) {
    out.reason = Termination::linesearch_fail;
    return out;
  }

  const auto n = x0.size();
  Mat H = Mat::Identity(n, n);
  for (int it = 0;; ++it) {
    if (cur.f < opts.stop_below) {
      out.reason = Termination::stabilized_and_quit;
      return out;
    }
    if (cur.g.norm() <= opts.grad_tol * (1.0 + std::abs(cur.f))) {
      out.reason = Termination::gradient_small;
      return out;
    }
    if (!cur.grad_reliable) {
      out.reason = Termination::linesearch_fail;
      return out;
    }
    if (it >= opts.max_iters) {
      out.reason = Termination::max_iters;
      return out;
    }

    Vec d = -(H * cur.g);
    double gd = cur.g.dot(d);
    if (!(gd < 0.0)) {  // non-descent from a corrupted H: restart steepest
      H.setIdentity();
      d = -cur.g;
      gd = cur.g.dot(d);
      if (!(gd < 0.0)) {
        out.reason = Termination::gradient_small;
        return out;
      }
    }

    LineSearchHit hit = line_search(f_and_g, out.x, d, cur.f, gd);
    if (!hit.ok) {
      out.reason = Termination::linesearch_fail;
      return out;
    }

    const Vec s = hit.x - out.x;
    const Vec y = hit.pt.g - cur.g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Vec Hy = H * y;
      H.noalias() -= rho * (s * Hy.transpose() + Hy * s.transpose());
      H.noalias() += (rho * rho * y.dot(Hy) + rho) * (s * s.transpose());
      if (!H.allFinite()) H.setIdentity();
    }

    out.x = std::move(hit.x);
    cur = std::move(hit.pt);
    out.f = cur.f;
    out.g = cur.g;
    out.iterations = it + 1;
  }
}

}  // namespace fixorder
