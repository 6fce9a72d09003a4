#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fixorder/errors.hpp"
#include "fixorder/statespace.hpp"
#include "fixorder/types.hpp"

namespace fixorder {

/// Order-k output-feedback controller xk' = Ak xk + Bk y, u = Ck xk + Dk y.
/// k = 0 degenerates to the static gain u = Dk y. The flat parameter vector
/// theta stacks [vec(Ak); vec(Bk); vec(Ck); vec(Dk)] column-major; encode and
/// decode are exact inverses.
struct ControllerParams {
  int order = 0;
  int ny = 0;
  int nu = 0;
  Mat Ak, Bk, Ck, Dk;

  static ControllerParams zero(int order, int ny, int nu);
  static ControllerParams from_theta(const Vec& theta, int order, int ny, int nu);

  Vec to_theta() const;
  int dim() const { return order * order + order * ny + nu * order + nu * ny; }

  /// The controller as a plain state-space system y -> u.
  StateSpaceModel to_model() const;
};

/// Wrap a plain state-space system as controller parameters
/// (order = states, ny = inputs, nu = outputs).
ControllerParams controller_from_model(const StateSpaceModel& k);

/// Realize a SISO transfer function and wrap it (ny = nu = 1).
ControllerParams controller_from_tf(const RationalSiso& k);

enum class Objective { stabilize_only, spectral_abscissa, hinf };

std::string to_string(Objective obj);
Objective parse_objective(const std::string& text);

/// One objective/gradient evaluation at a parameter point.
///   spectral_abscissa / stabilize_only: f = alpha(A_cl).
///   hinf: f = ||T_zw||_inf when the loop is stable; otherwise the penalized
///   abscissa alpha + penalty_barrier*||theta||^2 (stable = false flags the
///   fallback so the line search refuses to settle there).
/// grad_reliable = false marks a defective attaining eigenvalue or a repeated
/// leading singular value; the gradient is still returned but the optimizer
/// treats the direction as failed.
struct ObjectiveEval {
  double f = 0.0;
  Vec g;
  bool stable = false;
  bool grad_reliable = true;
  double alpha = 0.0;
};

ObjectiveEval objective_eval(const StateSpaceModel& p, const ControllerParams& params,
                             Objective objective, double penalty_barrier = 1e-3,
                             double hinf_tol = 1e-7);

enum class Termination { gradient_small, linesearch_fail, max_iters, stabilized_and_quit };

std::string to_string(Termination reason);

/// Point evaluation fed to the optimizer. acceptable = false bars the line
/// search from accepting the point (used for destabilizing H-infinity trial
/// steps); its f is still finite and informative.
struct EvalPoint {
  double f = std::numeric_limits<double>::infinity();
  Vec g;
  bool acceptable = true;
  bool grad_reliable = true;
};

struct BfgsOptions {
  int max_iters = 1000;
  double grad_tol = 1e-6;
  /// Terminate with stabilized_and_quit once f drops below this.
  double stop_below = -std::numeric_limits<double>::infinity();
};

struct BfgsOutcome {
  Vec x;
  double f = std::numeric_limits<double>::infinity();
  Vec g;
  int iterations = 0;
  Termination reason = Termination::linesearch_fail;
};

/// Inverse-Hessian BFGS with a weak-Wolfe bisection line search (sufficient
/// decrease c1 = 1e-4, weak curvature c2 = 0.5, at most 50 bracketing steps).
/// The update is skipped when s'y <= 1e-12 ||s|| ||y||. Monotone: the returned
/// f never exceeds f(x0). Suitable for nonsmooth objectives in the
/// Lewis-Overton sense.
BfgsOutcome bfgs_nonsmooth(const std::function<EvalPoint(const Vec&)>& f_and_g, const Vec& x0,
                           const BfgsOptions& opts);

struct SynthesisOptions {
  Objective objective = Objective::hinf;
  int n_starts = 3;
  std::uint64_t rng_seed = 0;
  int max_iters_per_start = 1000;
  double grad_tol = 1e-6;
  double init_scale = 1.0;
  double penalty_barrier = 1e-3;
  std::optional<ControllerParams> warm_start;
  /// Run starts concurrently. Serial and parallel runs are bit-identical.
  bool parallel = true;
};

struct StartTrace {
  int start_index = 0;
  double final_value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  Termination reason = Termination::linesearch_fail;
  bool stabilized = false;
  double theta_norm = 0.0;
};

struct SynthesisResult {
  ControllerParams best;
  double value = std::numeric_limits<double>::infinity();
  double alpha = std::numeric_limits<double>::infinity();
  bool stabilized = false;
  int best_start = -1;
  std::vector<StartTrace> per_start;
};

/// No start produced a stable closed loop; carries the least-unstable
/// controller found and its closed-loop abscissa.
struct StabilizationFailure : Error {
  ControllerParams least_unstable;
  double alpha;

  StabilizationFailure(ControllerParams k, double a)
      : Error("StabilizationFailure",
              "no stabilizing controller found; best closed-loop abscissa " + std::to_string(a)),
        least_unstable(std::move(k)),
        alpha(a) {}
};

/// Randomized multi-start synthesis. Start 0 uses the warm start verbatim when
/// one is given; later starts perturb it by 10% relative noise, or draw fresh
/// normal parameters scaled by init_scale. Each start stabilizes first
/// (abscissa descent until alpha < -penalty_barrier), then minimizes the
/// requested objective; each phase gets max_iters_per_start iterations.
/// Deterministic for a fixed rng_seed.
SynthesisResult synthesize(const StateSpaceModel& p, int order, const SynthesisOptions& opts);

/// Re-run synthesis warm-started from prev.best. Never regresses:
/// result.value <= prev.value + 1e-12.
SynthesisResult refine(const StateSpaceModel& p, int order, const SynthesisResult& prev,
                       const SynthesisOptions& opts);

}  // namespace fixorder
