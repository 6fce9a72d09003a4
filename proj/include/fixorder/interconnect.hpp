#pragma once

#include <optional>

#include "fixorder/statespace.hpp"

namespace fixorder {

/// Mixed-sensitivity augmentation of a plant G (p outputs, m inputs) with
/// exogenous input w (dim p) and control u (dim m):
///   e  = w - G u        (tracking error)
///   z1 = W1 e, z2 = W2 u, z3 = W3 G u, y = e
/// Each scalar weight is realized once and replicated diagonally across its
/// channel. Absent weights drop their z block; at least one must be present.
/// The result carries partition (nmeas = p, ncont = m). Closing the loop with
/// a controller K (positive feedback u = K y) yields
///   T_zw = [W1 S; W2 K S; W3 T_c],  S = (I + G K)^{-1},  T_c = I - S.
StateSpaceModel augw(const StateSpaceModel& g,
                     const std::optional<RationalSiso>& w1,
                     const std::optional<RationalSiso>& w2,
                     const std::optional<RationalSiso>& w3);

/// Lower LFT of a partitioned plant with a controller under POSITIVE
/// feedback u = K y. General D22 is supported through the well-posedness
/// inverse M = (I - Dk D22)^{-1}. The result maps w -> z and has no
/// partition; its state count is states(p) + states(k).
StateSpaceModel close_loop(const StateSpaceModel& p, const StateSpaceModel& k);

/// Closed-loop sensitivity S = (I + G K)^{-1} as a state-space model.
StateSpaceModel sensitivity_loop(const StateSpaceModel& g, const StateSpaceModel& k);

/// Closed-loop complementary sensitivity T = I - S.
StateSpaceModel complementary_loop(const StateSpaceModel& g, const StateSpaceModel& k);

}  // namespace fixorder
