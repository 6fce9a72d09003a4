// Acceptance gate for the synthesis toolkit. Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero when any criterion fails. The
// expensive benchmark sweep runs once and feeds criteria 4, 6 and 7.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixorder/analysis.hpp"
#include "fixorder/benchmarks.hpp"
#include "fixorder/errors.hpp"
#include "fixorder/interconnect.hpp"
#include "fixorder/statespace.hpp"
#include "fixorder/synthesis.hpp"
#include "oracle.hpp"
#include "screening.hpp"
#include "test_util.hpp"

using namespace fixorder;
using testutil::abscissa_smooth;
using testutil::leading_sv_gap_ok;
using testutil::random_synth_plant;
using testutil::single_dominant_peak;

namespace {

int failures = 0;

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return std::string(buf);
}

void run_criterion(int idx, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = fmt("unexpected exception: %s", e.what());
    ok = false;
  }
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double rel_dev(double got, double want) { return std::abs(got - want) / std::abs(want); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double closed_norm(const StateSpaceModel& p, const ControllerParams& k) {
  return hinf_norm(close_loop(p, k.to_model()), 1e-9).norm;
}

// Every published closed-loop figure reproduced from the shipped controller
// matrices through the analysis path.
bool criterion1(std::string& detail) {
  const StateSpaceModel cl =
      close_loop(ac1_plant(), reference::ac1_static_gain().to_model());
  Eigen::EigenSolver<Mat> es(cl.A(), false);
  const CVec lam = es.eigenvalues();
  const std::vector<Complex> want = {{-0.2537, 3.2758},
                                     {-0.2537, -3.2758},
                                     {-2.3229, 0.0},
                                     {-0.0796, 1.1206},
                                     {-0.0796, -1.1206}};
  std::vector<bool> used(static_cast<size_t>(lam.size()), false);
  double eig_dev = 0.0;
  for (const Complex& w : want) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (used[static_cast<size_t>(i)]) continue;
      const double d = std::abs(lam(i) - w);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    used[static_cast<size_t>(arg)] = true;
    eig_dev = std::max(eig_dev, best);
  }

  const double a1 = spectral_abscissa_value(
      close_loop(two_mass_spring_plant(), reference::two_mass_first().to_model()).A());
  const double tm_dev = std::abs(a1 - (-0.7073));

  const StateSpaceModel fd = four_disk_plant();
  const double r1 = rel_dev(closed_norm(fd, reference::four_disk_k1()), 1.4256);
  const double r2 = rel_dev(closed_norm(fd, reference::four_disk_k2()), 1.2438);
  const double r8 = rel_dev(closed_norm(fd, reference::four_disk_k8()), 1.1317);
  const double rg =
      rel_dev(closed_norm(gahinet_plant(), reference::gahinet_k2()), 21.5284);
  const double rk =
      rel_dev(closed_norm(kwakernaak_plant(), reference::kwakernaak_refined()), 6.00024);

  detail = fmt(
      "published controllers: static-gain eig dev %.2e (tol 5e-3), two-mass abscissa "
      "dev %.2e (tol 1e-3), norm rel devs %.1e/%.1e/%.1e disks (tol 1e-3), %.1e "
      "Gahinet, %.1e Kwakernaak (tol 1e-2)",
      eig_dev, tm_dev, r1, r2, r8, rg, rk);
  return eig_dev <= 5e-3 && tm_dev <= 1e-3 && r1 <= 1e-3 && r2 <= 1e-3 && r8 <= 1e-3 &&
         rg <= 1e-2 && rk <= 1e-2;
}

// Hamiltonian bisection against the dense-sweep oracle on random peaked systems.
bool criterion2(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(9001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const StateSpaceModel sys = testutil::random_peaked_system(rng, i);
    const double fast = hinf_norm(sys, 1e-8).norm;
    const double slow = oracle::hinf_by_sweep(sys).norm;
    worst = std::max(worst, std::abs(fast - slow) / slow);
  }
  const double secs = seconds_since(t0);
  detail = fmt("norm solver vs frequency-sweep oracle on 200 random systems: worst rel "
               "dev %.2e (tol 1e-6), %.1f s (limit 120)",
               worst, secs);
  return worst <= 1e-6 && secs < 120.0;
}

// Analytic gradients of both objectives against central finite differences on
// screened smooth instances.
bool criterion3(std::string& detail) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> nd(3, 5), kd(0, 2), cd(1, 2);
  double worst_abs = 0.0, worst_hinf = 0.0;

  int abs_ok = 0;
  for (int attempt = 0; attempt < 2400 && abs_ok < 60; ++attempt) {
    const int ny = cd(rng), nu = cd(rng);
    const StateSpaceModel p = random_synth_plant(rng, nd(rng), cd(rng), cd(rng), ny, nu);
    const int order = kd(rng);
    const ControllerParams k = ControllerParams::from_theta(
        testutil::random_vector(ControllerParams::zero(order, ny, nu).dim(), rng, 0.5),
        order, ny, nu);
    const ObjectiveEval e = objective_eval(p, k, Objective::spectral_abscissa);
    if (!e.grad_reliable) continue;
    if (!abscissa_smooth(close_loop(p, k.to_model()).A())) continue;
    const Vec fd = oracle::central_gradient(
        [&](const Vec& th) {
          return objective_eval(p, ControllerParams::from_theta(th, order, ny, nu),
                                Objective::spectral_abscissa)
              .f;
        },
        k.to_theta());
    worst_abs = std::max(worst_abs, (fd - e.g).cwiseAbs().maxCoeff() /
                                        (1.0 + e.g.cwiseAbs().maxCoeff()));
    ++abs_ok;
  }

  int hinf_ok = 0;
  for (int attempt = 0; attempt < 3600 && hinf_ok < 60; ++attempt) {
    const int ny = cd(rng), nu = cd(rng);
    const StateSpaceModel p = random_synth_plant(rng, nd(rng), cd(rng), cd(rng), ny, nu);
    const int order = kd(rng);
    const ControllerParams k = ControllerParams::from_theta(
        testutil::random_vector(ControllerParams::zero(order, ny, nu).dim(), rng, 0.3),
        order, ny, nu);
    const ObjectiveEval e = objective_eval(p, k, Objective::hinf);
    if (!e.stable || !e.grad_reliable || e.alpha > -1e-3) continue;
    const StateSpaceModel cl = close_loop(p, k.to_model());
    const HinfResult hr = hinf_norm(cl, 1e-7);
    if (!hr.converged || hr.norm <= 0.0) continue;
    if (!leading_sv_gap_ok(cl, hr.peak_frequency)) continue;
    if (!single_dominant_peak(cl)) continue;
    const Vec fd = oracle::central_gradient(
        [&](const Vec& th) {
          return objective_eval(p, ControllerParams::from_theta(th, order, ny, nu),
                                Objective::hinf)
              .f;
        },
        k.to_theta());
    worst_hinf = std::max(worst_hinf, (fd - e.g).cwiseAbs().maxCoeff() /
                                          (1.0 + e.g.cwiseAbs().maxCoeff()));
    ++hinf_ok;
  }

  detail = fmt("gradients vs central differences: %d abscissa instances worst %.2e, %d "
               "norm instances worst %.2e (tol 1e-5 each)",
               abs_ok, worst_abs, hinf_ok, worst_hinf);
  return abs_ok == 60 && hinf_ok == 60 && worst_abs <= 1e-5 && worst_hinf <= 1e-5;
}

const OrderResult* find_result(const BenchmarkReport& rep, const std::string& name,
                               int order) {
  for (const CaseReport& c : rep.cases)
    if (c.name == name)
      for (const OrderResult& r : c.orders)
        if (r.order == order) return &r;
  return nullptr;
}

// Full benchmark sweep at the published budget; each target order must meet its
// bound from a cold start.
bool criterion4(std::string& detail, BenchmarkReport& rep, bool& rep_ok) {
  RunOptions ro;
  ro.orders_override = {{"four_disk", {1, 2}}, {"gahinet_order_drop", {2, 3}},
                        {"himat", {3}}};
  rep = run_benchmarks(ro);
  rep_ok = true;

  struct Target {
    const char* name;
    int order;
    double bound;
  };
  const std::vector<Target> targets = {
      {"two_mass_spring", 2, -0.70},        {"four_disk", 1, 1.50},
      {"four_disk", 2, 1.31},               {"gahinet_order_drop", 2, 21.70},
      {"kwakernaak_sensitivity", 1, 6.20},  {"himat", 3, 1.30}};
  bool ok = true;
  std::string parts;
  for (const Target& t : targets) {
    const OrderResult* r = find_result(rep, t.name, t.order);
    const bool hit = r && r->ran && r->achieved <= t.bound;
    ok = ok && hit;
    parts += fmt("%s%s-%d %.4f/%.2f", parts.empty() ? "" : ", ", t.name, t.order,
                 r && r->ran ? r->achieved : std::numeric_limits<double>::quiet_NaN(),
                 t.bound);
  }
  const OrderResult* sof = find_result(rep, "ac1_sof", 0);
  const bool stab = sof && sof->ran && sof->alpha < 0.0;
  ok = ok && stab;
  parts += fmt(", ac1_sof-0 abscissa %.4f",
               sof && sof->ran ? sof->alpha : std::numeric_limits<double>::quiet_NaN());

  detail = fmt("synthesis targets (achieved/bound, 10 starts, seed 1729, one warm "
               "restart): %s, %.0f s total",
               parts.c_str(), rep.seconds);
  return ok;
}

// The analytic two-mass optimum has one defective closed-loop eigenvalue of
// multiplicity six; this asks for all six computed eigenvalues within 1e-6.
bool criterion5(std::string& detail) {
  const StateSpaceModel cl =
      close_loop(two_mass_spring_plant(), reference::two_mass_analytic().to_model());
  Eigen::EigenSolver<Mat> es(cl.A(), false);
  const CVec lam = es.eigenvalues();
  const double target = -std::sqrt(15.0) / 5.0;
  double dev = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    dev = std::max(dev, std::abs(lam(i) - Complex(target, 0.0)));
  detail = fmt("analytic optimum eigenvalue scatter %.3e around %.6f (tol 1e-6); a "
               "defective eigenvalue of multiplicity 6 spreads rounding noise as its "
               "sixth root, about 6e-3, so double precision cannot meet this tolerance",
               dev, target);
  return dev <= 1e-6;
}

// A third-order design warm-restarted from its first call and pushed below
// the second-order level must park a fast pole on a transmission zero.
bool criterion6(std::string& detail) {
  const StateSpaceModel plant = gahinet_plant();
  SynthesisResult cur;
  cur.best = reference::gahinet_k3_first();
  const ObjectiveEval e0 = objective_eval(plant, cur.best, Objective::hinf);
  cur.value = e0.f;
  cur.alpha = e0.alpha;
  cur.stabilized = true;
  double achieved = e0.f;

  SynthesisOptions so;
  so.objective = Objective::hinf;
  so.n_starts = 10;
  int passes = 0;
  while (achieved > 21.60 && passes < 6) {
    ++passes;
    so.rng_seed = 1729 + 1000ull * static_cast<unsigned long long>(passes);
    cur = refine(plant, 3, cur, so);
    achieved = closed_norm(plant, cur.best);
  }

  const ZpkForm z = ss_to_zpk(cur.best.to_model());
  double pair_gap = std::numeric_limits<double>::infinity();
  Complex pair_pole = 0.0, pair_zero = 0.0;
  for (Eigen::Index i = 0; i < z.poles.size(); ++i) {
    const Complex p = z.poles(i);
    if (std::abs(p) < 20.0) continue;
    for (Eigen::Index j = 0; j < z.zeros.size(); ++j) {
      const double gap = std::abs(p - z.zeros(j)) / std::abs(p);
      if (gap < pair_gap) {
        pair_gap = gap;
        pair_pole = p;
        pair_zero = z.zeros(j);
      }
    }
  }
  if (!std::isfinite(pair_gap)) {
    detail = fmt("order-3 norm %.4f after %d warm restart(s) from the first-call "
                 "controller, but no controller pole with magnitude >= 20",
                 achieved, passes);
    return false;
  }
  detail = fmt("order-3 norm %.4f (target 21.60) after %d warm restart(s) from the "
               "first-call controller at 21.9410; pole %.4g%+.4gi sits %.3f of its "
               "magnitude from zero %.4g%+.4gi (tol 0.15)",
               achieved, passes, pair_pole.real(), pair_pole.imag(), pair_gap,
               pair_zero.real(), pair_zero.imag());
  return achieved <= 21.60 && pair_gap <= 0.15;
}

// The mixed-sensitivity design must track both channels at dc through the bare
// model, not just score well on the weighted objective.
bool criterion7(std::string& detail, const BenchmarkReport& rep, bool rep_ok) {
  if (!rep_ok) {
    detail = "skipped: benchmark sweep unavailable";
    return false;
  }
  const OrderResult* r = find_result(rep, "himat", 3);
  if (!r || !r->ran) {
    detail = "order-3 synthesis did not run";
    return false;
  }
  const StateSpaceModel t = complementary_loop(himat_model(), r->best.to_model());
  const double alpha = spectral_abscissa_value(t.A());
  if (alpha >= 0.0) {
    detail = fmt("closed loop around the bare model is unstable (abscissa %.4g)", alpha);
    return false;
  }
  const Mat dc = dc_gain(t);
  const double d0 = std::abs(dc(0, 0) - 1.0);
  const double d1 = std::abs(dc(1, 1) - 1.0);
  detail = fmt("complementary sensitivity dc diagonal [%.4f, %.4f] (tol 0.1 around 1), "
               "closed-loop abscissa %.4f",
               dc(0, 0), dc(1, 1), alpha);
  return d0 <= 0.1 && d1 <= 0.1;
}

}  // namespace

int main() {
  std::printf("fixorder acceptance suite\n");
  BenchmarkReport rep;
  bool rep_ok = false;

  run_criterion(1, criterion1);
  run_criterion(2, criterion2);
  run_criterion(3, criterion3);
  run_criterion(4, [&](std::string& d) { return criterion4(d, rep, rep_ok); });
  run_criterion(5, criterion5);
  run_criterion(6, criterion6);
  run_criterion(7, [&](std::string& d) { return criterion7(d, rep, rep_ok); });

  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
