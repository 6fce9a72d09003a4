#include "fixorder/rational.hpp"

#include <algorithm>
#include <cmath>

#include "fixorder/errors.hpp"

namespace fixorder {

std::vector<double> poly_trim(std::vector<double> p) {
  std::size_t lead = 0;
  while (lead + 1 < p.size() && p[lead] == 0.0) ++lead;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead));
  if (p.empty()) p.push_back(0.0);
  return p;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[n - a.size() + i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[n - b.size() + i] += b[i];
  return poly_trim(std::move(out));
}

std::vector<double> poly_sub(const std::vector<double>& a, const std::vector<double>& b) {
  return poly_add(a, poly_scale(b, -1.0));
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {0.0};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return poly_trim(std::move(out));
}

std::vector<double> poly_scale(const std::vector<double>& a, double k) {
  std::vector<double> out(a);
  for (double& c : out) c *= k;
  return poly_trim(std::move(out));
}

Complex poly_eval(const std::vector<double>& p, Complex s) {
  Complex acc = 0.0;
  for (double c : p) acc = acc * s + c;
  return acc;
}

CVec poly_roots(const std::vector<double>& p) {
  const std::vector<double> q = poly_trim(p);
  const int n = static_cast<int>(q.size()) - 1;
  if (n <= 0 || (q.size() == 1 && q[0] == 0.0)) return CVec(0);
  Mat companion = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -q[static_cast<std::size_t>(j) + 1] / q[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Mat> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue iteration failed");
  return es.eigenvalues();
}

std::vector<double> poly_from_roots(const CVec& roots, double leading) {
  std::vector<double> p{1.0};
  std::vector<Complex> pending;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const Complex r = roots(i);
    if (std::abs(r.imag()) <= 1e-8 * (1.0 + std::abs(r))) {
      p = poly_mul(p, {1.0, -r.real()});
      continue;
    }
    auto partner = std::find_if(pending.begin(), pending.end(), [&](Complex c) {
      return std::abs(std::conj(c) - r) <= 1e-8 * (1.0 + std::abs(r));
    });
    if (partner == pending.end()) {
      pending.push_back(r);
      continue;
    }
    const Complex sum = r + *partner;
    const Complex prod = r * *partner;
    const double scale = 1.0 + std::abs(r) * std::abs(r);
    if (std::abs(sum.imag()) > 1e-8 * (1.0 + std::abs(sum)) || std::abs(prod.imag()) > 1e-8 * scale)
      throw NumericalError("conjugate pair reconstruction exceeded tolerance");
    p = poly_mul(p, {1.0, -sum.real(), prod.real()});
    pending.erase(partner);
  }
  if (!pending.empty()) throw NumericalError("complex roots not closed under conjugation");
  return poly_scale(p, leading);
}

namespace {

bool poly_is_zero(const std::vector<double>& p) {
  return p.size() == 1 && p[0] == 0.0;
}

}  // namespace

RationalSiso::RationalSiso() : num_{0.0}, den_{1.0} {}

RationalSiso::RationalSiso(std::vector<double> num, std::vector<double> den) {
  if (den.empty()) throw DegenerateError("empty denominator");
  den_ = poly_trim(std::move(den));
  if (poly_is_zero(den_)) throw DegenerateError("zero denominator");
  num_ = poly_trim(std::move(num));
  if (poly_is_zero(num_)) {
    den_ = {1.0};
    return;
  }
  const double lead = den_[0];
  for (double& c : num_) c /= lead;
  for (double& c : den_) c /= lead;
  den_[0] = 1.0;
  while (num_.size() > 1 && den_.size() > 1 && num_.back() == 0.0 && den_.back() == 0.0) {
    num_.pop_back();
    den_.pop_back();
  }
}

RationalSiso RationalSiso::constant(double k) { return RationalSiso({k}, {1.0}); }

RationalSiso RationalSiso::s() { return RationalSiso({1.0, 0.0}, {1.0}); }

bool RationalSiso::is_zero() const { return poly_is_zero(num_); }

Complex RationalSiso::eval(Complex s) const {
  return poly_eval(num_, s) / poly_eval(den_, s);
}

RationalSiso rational_arith(const RationalSiso& a, const RationalSiso& b, RationalOp op) {
  switch (op) {
    case RationalOp::add:
      return RationalSiso(
          poly_add(poly_mul(a.num(), b.den()), poly_mul(b.num(), a.den())),
          poly_mul(a.den(), b.den()));
    case RationalOp::mul:
      return RationalSiso(poly_mul(a.num(), b.num()), poly_mul(a.den(), b.den()));
    case RationalOp::div:
      if (b.is_zero()) throw DegenerateError("division by zero rational");
      return RationalSiso(poly_mul(a.num(), b.den()), poly_mul(a.den(), b.num()));
  }
  throw ConfigError("unknown rational operation");
}

RationalSiso operator+(const RationalSiso& a, const RationalSiso& b) {
  return rational_arith(a, b, RationalOp::add);
}

RationalSiso operator-(const RationalSiso& a, const RationalSiso& b) {
  return rational_arith(a, RationalSiso(poly_scale(b.num(), -1.0), b.den()), RationalOp::add);
}

RationalSiso operator*(const RationalSiso& a, const RationalSiso& b) {
  return rational_arith(a, b, RationalOp::mul);
}

RationalSiso operator/(const RationalSiso& a, const RationalSiso& b) {
  return rational_arith(a, b, RationalOp::div);
}

}  // namespace fixorder
