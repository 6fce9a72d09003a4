#pragma once

#include <optional>

#include "fixorder/rational.hpp"
#include "fixorder/types.hpp"

namespace fixorder {

/// TITO split: the LAST nmeas outputs are measurements y, the LAST ncont
/// inputs are controls u; everything before them is the performance pair
/// (w -> z).
struct Partition {
  int nmeas = 0;
  int ncont = 0;
};

/// Continuous-time LTI system x' = Ax + Bu, y = Cx + Du. Immutable after
/// construction; operations on models are pure functions.
class StateSpaceModel {
 public:
  StateSpaceModel();
  StateSpaceModel(Mat A, Mat B, Mat C, Mat D);
  StateSpaceModel(Mat A, Mat B, Mat C, Mat D, Partition partition);

  int states() const { return static_cast<int>(A_.rows()); }
  int inputs() const { return static_cast<int>(B_.cols()); }
  int outputs() const { return static_cast<int>(C_.rows()); }

  const Mat& A() const { return A_; }
  const Mat& B() const { return B_; }
  const Mat& C() const { return C_; }
  const Mat& D() const { return D_; }
  const std::optional<Partition>& partition() const { return partition_; }

  // Partitioned blocks; ConfigError when no partition is attached.
  int nmeas() const;
  int ncont() const;
  Mat B1() const;
  Mat B2() const;
  Mat C1() const;
  Mat C2() const;
  Mat D11() const;
  Mat D12() const;
  Mat D21() const;
  Mat D22() const;

  /// Frequency response C (sI - A)^{-1} B + D.
  CMat eval(Complex s) const;

 private:
  void validate() const;

  Mat A_, B_, C_, D_;
  std::optional<Partition> partition_;
};

/// Attach a TITO partition; the matrix data is unchanged.
StateSpaceModel mktito(const StateSpaceModel& sys, int nmeas, int ncont);

/// Controllable canonical realization of a proper transfer function.
StateSpaceModel tf_to_ss(const RationalSiso& g);

/// Exact transfer function of one SISO channel via the Faddeev-LeVerrier
/// recursion (denominator = char poly of A; no cancellation performed).
/// Channel indices are 0-based.
RationalSiso channel_tf(const StateSpaceModel& sys, int out = 0, int in = 0);

/// Zero/pole/gain form. Canonical ordering sorts by (Re, |Im|, Im) so
/// conjugate pairs are adjacent; reconstruction to real coefficients must
/// close within 1e-8 relative.
struct ZpkForm {
  CVec zeros;
  CVec poles;
  double gain = 0.0;

  RationalSiso to_rational() const;
  Complex eval(Complex s) const;
};

/// Canonicalize and validate a zero/pole/gain triple.
ZpkForm make_zpk(CVec zeros, CVec poles, double gain);

/// Channel zpk: poles of the minimal channel realization, zeros as finite
/// generalized eigenvalues of the system pencil [A-sI, b; c, d]. Exactly
/// coincident pole/zero pairs (hidden modes) are cancelled. 0-based indices.
ZpkForm ss_to_zpk(const StateSpaceModel& sys, int out = 0, int in = 0);

}  // namespace fixorder
