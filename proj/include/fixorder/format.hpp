#pragma once

#include <string>
#include <vector>

#include "fixorder/statespace.hpp"
#include "fixorder/types.hpp"

namespace fixorder {

/// %.{digits}g rendering; digits clamped to [1, 17].
std::string format_number(double x, int digits = 6);

/// "-0.2537 + 3.2758i"; pure reals drop the imaginary part.
std::string format_complex(Complex z, int digits = 6);

/// Polynomial in s, descending powers: "s^2 + 4.2752s + 6.0786".
std::string format_poly(const std::vector<double>& coeffs, int digits = 6);

/// Three-line numerator / rule / denominator display.
std::string format_tf(const RationalSiso& g, int digits = 6);

/// Factored gain (s+a) (s^2 + bs + c) display; conjugate pairs collapse to
/// real quadratics.
std::string format_zpk(const ZpkForm& z, int digits = 6);

/// Column-aligned matrix block.
std::string format_matrix(const Mat& m, int digits = 6);

}  // namespace fixorder
