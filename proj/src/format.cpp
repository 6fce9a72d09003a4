#include "fixorder/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fixorder {

std::string format_number(double x, int digits) {
  digits = std::clamp(digits, 1, 17);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string format_complex(Complex z, int digits) {
  if (z.imag() == 0.0) return format_number(z.real(), digits);
  return format_number(z.real(), digits) + (z.imag() < 0 ? " - " : " + ") +
         format_number(std::abs(z.imag()), digits) + "i";
}

std::string format_poly(const std::vector<double>& coeffs, int digits) {
  const std::vector<double> c = poly_trim(coeffs);
  const int deg = static_cast<int>(c.size()) - 1;
  std::string out;
  for (int i = 0; i <= deg; ++i) {
    const double v = c[static_cast<std::size_t>(i)];
    const int power = deg - i;
    if (v == 0.0 && deg > 0) continue;
    if (out.empty()) {
      if (v < 0) out += "-";
    } else {
      out += v < 0 ? " - " : " + ";
    }
    const double a = std::abs(v);
    if (power == 0 || a != 1.0) out += format_number(a, digits);
    if (power >= 1) out += "s";
    if (power >= 2) out += "^" + std::to_string(power);
  }
  return out.empty() ? "0" : out;
}

namespace {

std::string centered(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return std::string((width - s.size()) / 2, ' ') + s;
}

std::string fraction(const std::string& num, const std::string& den) {
  const std::size_t width = std::max(num.size(), den.size());
  return centered(num, width) + "\n" + std::string(width, '-') + "\n" + centered(den, width);
}

// Collapse a conjugate-sorted root list into real linear/quadratic factors.
std::string factored(const CVec& roots, int digits) {
  std::string out;
  Eigen::Index i = 0;
  while (i < roots.size()) {
    const Complex r = roots(i);
    std::vector<double> factor;
    if (std::abs(r.imag()) <= 1e-9 * (1.0 + std::abs(r))) {
      factor = {1.0, -r.real()};
      i += 1;
    } else {
      factor = {1.0, -2.0 * r.real(), r.real() * r.real() + r.imag() * r.imag()};
      i += 2;
    }
    if (!out.empty()) out += " ";
    out += "(" + format_poly(factor, digits) + ")";
  }
  return out;
}

}  // namespace

std::string format_tf(const RationalSiso& g, int digits) {
  return fraction(format_poly(g.num(), digits), format_poly(g.den(), digits));
}

std::string format_zpk(const ZpkForm& z, int digits) {
  std::string num = format_number(z.gain, digits);
  const std::string zero_factors = factored(z.zeros, digits);
  if (!zero_factors.empty()) num += " " + zero_factors;
  std::string den = factored(z.poles, digits);
  if (den.empty()) den = "1";
  return fraction(num, den);
}

std::string format_matrix(const Mat& m, int digits) {
  if (m.size() == 0) return "  []";
  std::vector<std::string> cells(static_cast<std::size_t>(m.size()));
  std::vector<std::size_t> width(static_cast<std::size_t>(m.cols()), 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::string s = format_number(m(i, c), digits);
      width[static_cast<std::size_t>(c)] =
          std::max(width[static_cast<std::size_t>(c)], s.size());
      cells[static_cast<std::size_t>(i * m.cols() + c)] = std::move(s);
    }
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const std::string& s = cells[static_cast<std::size_t>(i * m.cols() + c)];
      out += "  " + std::string(width[static_cast<std::size_t>(c)] - s.size(), ' ') + s;
    }
    if (i + 1 < m.rows()) out += "\n";
  }
  return out;
}

}  // namespace fixorder
