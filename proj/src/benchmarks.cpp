#include "fixorder/benchmarks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "fixorder/analysis.hpp"
#include "fixorder/errors.hpp"
#include "fixorder/interconnect.hpp"

namespace fixorder {

StateSpaceModel ac1_plant() {
  Mat A(5, 5);
  A << 0, 0, 1.132, 0, -1,
      0, -0.0538, -0.1712, 0, 0.0705,
      0, 0, 0, 1, 0,
      0, 0.0485, 0, -0.8556, -1.013,
      0, -0.2909, 0, 1.053, -0.6859;
  Mat B(5, 3);
  B << 0, 0, 0,
      -0.12, 1, 0,
      0, 0, 0,
      4.419, 0, -1.665,
      1.575, 0, -0.0732;
  Mat C = Mat::Zero(3, 5);
  C(0, 0) = 1;
  C(1, 1) = 1;
  C(2, 2) = 1;
  return mktito(StateSpaceModel(A, B, C, Mat::Zero(3, 3)), 3, 3);
}

StateSpaceModel two_mass_spring_plant() {
  return mktito(tf_to_ss(RationalSiso({1}, {1, 0, 2, 0, 0})), 1, 1);
}

StateSpaceModel himat_model() {
  Mat A(6, 6);
  A << -2.2567e-02, -3.6617e+01, -1.8897e+01, -3.2090e+01, 3.2509e+00, -7.6257e-01,
      9.2572e-05, -1.8997e+00, 9.8312e-01, -7.2562e-04, -1.7080e-01, -4.9652e-03,
      1.2338e-02, 1.1720e+01, -2.6316e+00, 8.7582e-04, -3.1604e+01, 2.2396e+01,
      0, 0, 1.0000e+00, 0, 0, 0,
      0, 0, 0, 0, -3.0000e+01, 0,
      0, 0, 0, 0, 0, -3.0000e+01;
  Mat B = Mat::Zero(6, 2);
  B(4, 0) = 30;
  B(5, 1) = 30;
  Mat C = Mat::Zero(2, 6);
  C(0, 1) = 1;
  C(1, 3) = 1;
  return StateSpaceModel(A, B, C, Mat::Zero(2, 2));
}

RationalSiso himat_w1() { return RationalSiso({0.5, 5}, {1, 0.15}); }

RationalSiso himat_w3() { return RationalSiso({1, 10}, {0.05, 20}); }

StateSpaceModel himat_plant() {
  return augw(himat_model(), himat_w1(), std::nullopt, himat_w3());
}

StateSpaceModel four_disk_plant() {
  Mat A = Mat::Zero(8, 8);
  A.row(0) << -0.161, -6.004, -0.58215, -9.9835, -0.40727, -3.982, 0, 0;
  A.block(1, 0, 7, 7) = Mat::Identity(7, 7);
  Mat B = Mat::Zero(8, 3);
  B.row(0) << 1, 0, 1;
  Mat C = Mat::Zero(3, 8);
  C.row(0) << 0, 0, 0, 0, 0.55e-3, 11e-3, 1.32e-3, 18e-3;
  C.row(2) << 0, 0, 6.4432e-3, 2.3196e-3, 7.1252e-2, 1.0002, 0.10455, 0.99551;
  Mat D(3, 3);
  D << 0, 0, 0,
      0, 0, 1,
      0, 1, 0;
  return mktito(StateSpaceModel(A, B, C, D), 1, 1);
}

StateSpaceModel gahinet_plant() {
  Mat A(3, 3);
  A << 1, -1, 0,
      1, 1, -1,
      0, 1, -2;
  Mat B(3, 4);  // [B1 B2]
  B << 1, 2, 0, 1,
      0, -1, 0, 0,
      1, 1, 0, 1;
  Mat C(4, 3);  // [C1; C2]
  C << 0, 0, 0,
      1, 1, 0,
      -1, 0, 1,
      0, -1, 1;
  Mat D = Mat::Zero(4, 4);  // [D11 D12; D21 D22]
  D(0, 3) = 1;
  D(3, 2) = 1;
  return mktito(StateSpaceModel(A, B, C, D), 1, 1);
}

RationalSiso kwakernaak_model() { return RationalSiso({1, -1}, {1, -5, 6}); }

StateSpaceModel kwakernaak_plant() {
  return augw(tf_to_ss(kwakernaak_model()), RationalSiso::constant(1), std::nullopt, std::nullopt);
}

namespace reference {

ControllerParams ac1_static_gain() {
  ControllerParams k = ControllerParams::zero(0, 3, 3);
  k.Dk << 0.1778, -0.06802, -2.76,
      0.6741, -1.402, 2.051,
      1.463, 2.957, -1.568;
  return k;
}

ControllerParams two_mass_first() {
  return controller_from_tf(
      RationalSiso({6.8308175, -1.8486865, -0.28043397}, {1, 4.2752492, 6.0786141}));
}

ControllerParams two_mass_third() {
  return controller_from_tf(
      RationalSiso({8.073790, -1.7330367, -0.23544720}, {1, 4.5435259, 6.7343390}));
}

ControllerParams two_mass_analytic() {
  const double r15 = std::sqrt(15.0);
  return controller_from_tf(RationalSiso({43.0 / 5.0, -54.0 * r15 / 125.0, -27.0 / 125.0},
                                         {1.0, 6.0 * r15 / 5.0, 7.0}));
}

ControllerParams himat_k3() {
  ControllerParams k = ControllerParams::zero(3, 2, 2);
  k.Ak << -11.1, -0.2587, 31.93,
      2.4, 0.03315, -7.116,
      189, 2.964, -559.5;
  k.Bk << -9.617, 50.87,
      2.369, -10.98,
      108.1, -853.5;
  k.Ck << 56.08, 1.175, -88.97,
      22.51, 2.271, 47.12;
  k.Dk << -51.53, -77.27,
      -106.1, 156.2;
  return k;
}

ControllerParams four_disk_k1() {
  return controller_from_tf(RationalSiso({-0.1227, -0.003706}, {1, 0.2082}));
}

ControllerParams four_disk_k2() {
  return controller_from_tf(
      RationalSiso({-0.03473, -0.1821, -0.006087}, {1, 0.6846, 0.2454}));
}

namespace {

std::vector<double> poly_product(const std::vector<std::vector<double>>& factors) {
  std::vector<double> out{1.0};
  for (const auto& f : factors) out = poly_mul(out, f);
  return out;
}

}  // namespace

ControllerParams four_disk_k8() {
  const std::vector<double> num = poly_scale(
      poly_product({{1, 3.232}, {1, 0.03049}, {1, 0.02897, 0.5845},
                    {1, 0.08555, 1.995}, {1, 2.208, 10.51}}),
      -1.1301);
  const std::vector<double> den = poly_product(
      {{1, 3.295}, {1, 0.6869}, {1, 0.2009, 0.7842}, {1, 0.4285, 2.09}, {1, 2.205, 10.71}});
  return controller_from_tf(RationalSiso(num, den));
}

ControllerParams gahinet_k2() {
  const std::vector<double> num =
      poly_scale(poly_product({{1, 1.672}, {1, -0.7551}}), 21.5284);
  const std::vector<double> den = poly_product({{1, 29.28}, {1, 0.09616}});
  return controller_from_tf(RationalSiso(num, den));
}

ControllerParams gahinet_k3_first() {
  return controller_from_tf(
      RationalSiso({12.67, 504.1, 430.7, -632.7}, {1, 42.13, 680.1, 64.37}));
}

ControllerParams gahinet_k3_second() {
  return controller_from_tf(
      RationalSiso({20.64, 1097, 961.6, -1362}, {1, 78.46, 1475, 141}));
}

ControllerParams kwakernaak_first() {
  return controller_from_tf(RationalSiso({-4.882e4, 2.939e5}, {1, 5.874e4}));
}

ControllerParams kwakernaak_refined() {
  return controller_from_tf(
      RationalSiso(poly_scale({1, -6.001}, -48748.0539), {1, 5.851e4}));
}

}  // namespace reference

std::vector<BenchmarkCase> catalog() {
  std::vector<BenchmarkCase> cases;

  {
    BenchmarkCase c;
    c.name = "ac1_sof";
    c.description = "COMPleib AC1 aircraft model: static output feedback stabilization";
    c.plant = ac1_plant();
    c.objective = Objective::stabilize_only;
    c.orders = {0};
    c.bounds = {{0, 0.0}};
    cases.push_back(std::move(c));
  }
  {
    BenchmarkCase c;
    c.name = "two_mass_spring";
    c.description = "two-mass-spring decay rate: order-2 spectral abscissa minimization";
    c.plant = two_mass_spring_plant();
    c.objective = Objective::spectral_abscissa;
    c.orders = {2};
    c.reference_values = {{2, -0.7572}};
    c.bounds = {{2, -0.70}};
    c.constants = {{"first_call", -0.7073},
                   {"restart", -0.7380},
                   {"analytic_bound", -std::sqrt(15.0) / 5.0}};
    cases.push_back(std::move(c));
  }
  {
    BenchmarkCase c;
    c.name = "himat";
    c.description = "HiMAT pitch axis mixed-sensitivity design across orders 0-3";
    c.plant = himat_plant();
    c.objective = Objective::hinf;
    c.orders = {0, 1, 2, 3};
    c.reference_values = {{0, 3.8207}, {1, 2.1477}, {2, 1.5245}, {3, 0.9897}};
    c.bounds = {{3, 1.30}};
    c.constants = {{"full_order_mixsyn", 0.7885}};
    cases.push_back(std::move(c));
  }
  {
    BenchmarkCase c;
    c.name = "four_disk";
    c.description = "four-disk flexible system: fixed-order designs against reduction methods";
    c.plant = four_disk_plant();
    c.objective = Objective::hinf;
    c.orders = {1, 2, 3, 4, 5, 6, 7, 8};
    c.reference_values = {{1, 1.4256}, {2, 1.2438}, {6, 1.1326}, {7, 1.1267}, {8, 1.1317}};
    c.bounds = {{1, 1.50}, {2, 1.31}};
    c.constants = {{"reduction_order_1", 2.4670},
                   {"reduction_order_2", 1.4150},
                   {"reduction_order_6", 1.1950},
                   {"reduction_order_7", 1.1960},
                   {"full_order", 1.1272}};
    cases.push_back(std::move(c));
  }
  {
    BenchmarkCase c;
    c.name = "gahinet_order_drop";
    c.description = "regular 3-state problem whose optimal controller drops to order 2";
    c.plant = gahinet_plant();
    c.objective = Objective::hinf;
    c.orders = {2, 3};
    c.reference_values = {{2, 21.5284}, {3, 21.5488}};
    c.bounds = {{2, 21.70}, {3, 21.60}};
    c.constants = {{"are_performance", 21.5284},
                   {"are_optimum", 21.5279},
                   {"lmi_performance", 21.6040},
                   {"order_3_first_call", 21.9398}};
    cases.push_back(std::move(c));
  }
  {
    BenchmarkCase c;
    c.name = "kwakernaak_sensitivity";
    c.description = "minimum sensitivity problem whose optimum needs a non-proper controller";
    c.plant = kwakernaak_plant();
    c.objective = Objective::hinf;
    c.orders = {1};
    c.reference_values = {{1, 6.00024}};
    c.bounds = {{1, 6.20}};
    c.constants = {{"nonproper_optimum", 6.0}, {"first_call", 6.01608}};
    cases.push_back(std::move(c));
  }
  return cases;
}

BenchmarkCase find_case(const std::string& name) {
  std::string known;
  for (auto& c : catalog()) {
    if (c.name == name) return c;
    known += known.empty() ? c.name : ", " + c.name;
  }
  throw ConfigError("unknown benchmark case '" + name + "' (known: " + known + ")");
}

bool BenchmarkReport::all_passed() const {
  for (const auto& c : cases) {
    if (!c.error.empty()) return false;
    for (const auto& o : c.orders)
      if (!o.pass) return false;
  }
  return true;
}

namespace {

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw ConfigError("failed while writing '" + path + "'");
}

const OrderResult* highest_completed(const CaseReport& cr) {
  const OrderResult* pick = nullptr;
  for (const auto& o : cr.orders)
    if (o.ran && (!pick || o.order > pick->order)) pick = &o;
  return pick;
}

// Loop-shape artifacts for the aircraft case: decoupled step responses and the
// S/T singular value profiles under the best controller of the highest order.
void himat_artifacts(const CaseReport& cr, const std::string& outdir,
                     std::vector<std::string>& artifacts) {
  const OrderResult* best = highest_completed(cr);
  if (!best) return;
  const StateSpaceModel g = himat_model();
  const StateSpaceModel k = best->best.to_model();
  const StateSpaceModel s = sensitivity_loop(g, k);
  const StateSpaceModel t = complementary_loop(g, k);

  const StepResponse resp = step_response(t, 2.0, 201);
  std::vector<std::vector<double>> rows;
  rows.reserve(resp.t.size());
  for (std::size_t i = 0; i < resp.t.size(); ++i)
    rows.push_back({resp.t[i], resp.y[i](0, 0), resp.y[i](1, 0), resp.y[i](0, 1),
                    resp.y[i](1, 1)});
  const std::string step_path = outdir + "/himat_step.csv";
  write_csv(step_path, {"t", "y11", "y21", "y12", "y22"}, rows);
  artifacts.push_back(step_path);

  const std::vector<double> grid = log_grid(1e-2, 1e2, 200);
  const Mat ss = sigma(s, grid);
  const Mat st = sigma(t, grid);
  rows.clear();
  for (std::size_t i = 0; i < grid.size(); ++i)
    rows.push_back({grid[i], ss(static_cast<Eigen::Index>(i), 0), ss(static_cast<Eigen::Index>(i), 1),
                    st(static_cast<Eigen::Index>(i), 0), st(static_cast<Eigen::Index>(i), 1)});
  const std::string sigma_path = outdir + "/himat_sigma.csv";
  write_csv(sigma_path, {"w", "s_sigma1", "s_sigma2", "t_sigma1", "t_sigma2"}, rows);
  artifacts.push_back(sigma_path);
}

// Controller-vs-plant magnitude plot data for the flexible-modes case: the
// controller's valleys line up with the plant resonance peaks.
void four_disk_artifacts(const CaseReport& cr, const std::string& outdir,
                         std::vector<std::string>& artifacts) {
  const OrderResult* best = highest_completed(cr);
  if (!best) return;
  const StateSpaceModel k = best->best.to_model();
  const StateSpaceModel p = four_disk_plant();
  const StateSpaceModel channel(p.A(), p.B().col(2), p.C().row(2),
                                Mat::Constant(1, 1, p.D()(2, 2)));

  const std::vector<double> grid = log_grid(1e-1, 1e1, 100);
  const Mat sk = sigma(k, grid);
  const Mat sp = sigma(channel, grid);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i)
    rows.push_back({grid[i], sk(static_cast<Eigen::Index>(i), 0),
                    sp(static_cast<Eigen::Index>(i), 0)});
  const std::string path = outdir + "/four_disk_sigma.csv";
  write_csv(path, {"w", "controller_sigma", "plant_sigma"}, rows);
  artifacts.push_back(path);
}

}  // namespace

BenchmarkReport run_benchmarks(const RunOptions& opts) {
  const auto t_run0 = std::chrono::steady_clock::now();
  BenchmarkReport report;

  std::vector<BenchmarkCase> cases;
  if (opts.selection.empty()) {
    cases = catalog();
  } else {
    for (const auto& name : opts.selection) cases.push_back(find_case(name));
  }

  for (const auto& bc : cases) {
    CaseReport cr;
    cr.name = bc.name;
    cr.objective = bc.objective;
    cr.seed = opts.seed.value_or(bc.budget.seed);
    cr.n_starts = opts.n_starts.value_or(bc.budget.n_starts);

    std::vector<int> orders = bc.orders;
    if (auto it = opts.orders_override.find(bc.name); it != opts.orders_override.end())
      orders = it->second;

    for (int order : orders) {
      OrderResult r;
      r.order = order;
      if (auto it = bc.reference_values.find(order); it != bc.reference_values.end())
        r.reference = it->second;
      if (auto it = bc.bounds.find(order); it != bc.bounds.end()) r.bound = it->second;

      const auto t0 = std::chrono::steady_clock::now();
      try {
        SynthesisOptions so;
        so.objective = bc.objective;
        so.n_starts = cr.n_starts;
        so.rng_seed = cr.seed;
        so.max_iters_per_start = opts.max_iters_per_start.value_or(so.max_iters_per_start);
        so.parallel = opts.parallel;

        SynthesisResult res = synthesize(bc.plant, order, so);
        if (opts.refine_pass && bc.objective != Objective::stabilize_only)
          res = refine(bc.plant, order, res, so);

        r.best = res.best;
        r.best_start = res.best_start;
        r.optimizer_value = res.value;

        const StateSpaceModel cl = close_loop(bc.plant, res.best.to_model());
        r.alpha = spectral_abscissa_value(cl.A());
        r.achieved = bc.objective == Objective::hinf ? hinf_norm(cl, 1e-7).norm : r.alpha;
        r.ran = true;
        r.pass = !r.bound || r.achieved <= *r.bound;
      } catch (const Error& e) {
        r.error = e.what();
        r.pass = false;
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      cr.orders.push_back(std::move(r));
    }

    if (!opts.outdir.empty()) {
      try {
        if (bc.name == "himat") himat_artifacts(cr, opts.outdir, cr.artifacts);
        if (bc.name == "four_disk") four_disk_artifacts(cr, opts.outdir, cr.artifacts);
      } catch (const Error& e) {
        cr.error = e.what();
      }
    }
    report.cases.push_back(std::move(cr));
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_run0).count();
  return report;
}

}  // namespace fixorder
