#pragma once

#include <vector>

#include "fixorder/types.hpp"

namespace fixorder {

// Polynomials are real coefficient vectors in descending powers of s.
// The canonical form has a nonzero leading coefficient (the zero polynomial
// is {0}).

/// Drop leading zero coefficients; never returns an empty vector.
std::vector<double> poly_trim(std::vector<double> p);

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_sub(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_scale(const std::vector<double>& a, double k);

Complex poly_eval(const std::vector<double>& p, Complex s);

/// Roots via the companion-matrix eigenproblem; degree-0 input has none.
CVec poly_roots(const std::vector<double>& p);

/// Expand leading·Π(s−r_i) into real coefficients. Complex roots must occur
/// in conjugate pairs (tolerance 1e-8 relative); otherwise NumericalError.
std::vector<double> poly_from_roots(const CVec& roots, double leading = 1.0);

enum class RationalOp { add, mul, div };

/// SISO transfer function num(s)/den(s), both in descending powers.
/// Canonical form: monic denominator, leading zeros stripped, common
/// trailing zero coefficients trimmed, the zero function stored as 0/1.
class RationalSiso {
 public:
  RationalSiso();  // the zero function
  RationalSiso(std::vector<double> num, std::vector<double> den);

  static RationalSiso constant(double k);
  static RationalSiso s();  // the differentiator s/1

  const std::vector<double>& num() const { return num_; }
  const std::vector<double>& den() const { return den_; }
  int num_degree() const { return static_cast<int>(num_.size()) - 1; }
  int den_degree() const { return static_cast<int>(den_.size()) - 1; }
  bool proper() const { return is_zero() || num_degree() <= den_degree(); }
  bool is_zero() const;

  Complex eval(Complex s) const;

 private:
  std::vector<double> num_;
  std::vector<double> den_;
};

RationalSiso rational_arith(const RationalSiso& a, const RationalSiso& b, RationalOp op);

RationalSiso operator+(const RationalSiso& a, const RationalSiso& b);
RationalSiso operator-(const RationalSiso& a, const RationalSiso& b);
RationalSiso operator*(const RationalSiso& a, const RationalSiso& b);
RationalSiso operator/(const RationalSiso& a, const RationalSiso& b);

}  // namespace fixorder
