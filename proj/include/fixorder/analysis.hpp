#pragma once

#include <utility>
#include <vector>

#include "fixorder/statespace.hpp"

namespace fixorder {

/// Full eigen-decomposition of a real matrix: values, right eigenvectors x
/// (A x = λ x) and left eigenvectors y (yᴴ A = λ yᴴ), columnwise, matched by
/// eigenvalue. Left vectors come from the transpose problem paired to the
/// conjugate eigenvalue.
struct EigTriple {
  CVec values;
  CMat right;
  CMat left;
};

EigTriple eig_triple(const Mat& A);

/// max Re λ(A); eigenvalues only, no eigenvectors.
double spectral_abscissa_value(const Mat& A);

/// Spectral abscissa of the system's A matrix together with the full
/// eigen-decomposition.
std::pair<double, EigTriple> spectral_abscissa(const StateSpaceModel& sys);

struct HinfResult {
  double norm = 0.0;
  double peak_frequency = 0.0;
  bool converged = false;
};

/// H-infinity norm by Hamiltonian bisection. Unstable systems return
/// +infinity. The reported norm is σmax evaluated at the refined peak
/// frequency, certified within the relative tolerance by bisection.
HinfResult hinf_norm(const StateSpaceModel& sys, double tol = 1e-6);

/// Level certification predicate behind the bisection: true iff the
/// Hamiltonian H(γ) has no eigenvalue within imag_tol of the imaginary axis,
/// i.e. ∥sys∥∞ < γ. Requires a stable system and γ > σmax(D) (ConfigError).
bool hinf_level_certified(const StateSpaceModel& sys, double gamma);

/// Singular values of the frequency response, one row per frequency,
/// descending within each row. OpenMP-parallel over frequencies.
Mat sigma(const StateSpaceModel& sys, const std::vector<double>& freqs);

/// Serial reference implementation of sigma; bit-identical results.
Mat sigma_serial(const StateSpaceModel& sys, const std::vector<double>& freqs);

/// Logarithmically spaced frequency grid, inclusive of both ends.
std::vector<double> log_grid(double wmin, double wmax, int points);

/// Unit-step responses: y[k] is the outputs×inputs matrix of responses at
/// t[k], one column per separately stepped input.
struct StepResponse {
  std::vector<double> t;
  std::vector<Mat> y;
};

/// Exact zero-order-hold discretization at Δ = t_final/(n_points-1) via the
/// matrix exponential of the (n+m)-augmented matrix.
StepResponse step_response(const StateSpaceModel& sys, double t_final, int n_points);

/// DC gain -C A⁻¹ B + D; NumericalError when A is singular.
Mat dc_gain(const StateSpaceModel& sys);

}  // namespace fixorder
