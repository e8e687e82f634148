#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gw/surface.hpp"

namespace gw {

// Per-part constraint on the anticanonical degree 3d - sum(a) of the part.
// Parts outside their window cannot carry a dimension-admissible invariant,
// so the enumeration prunes them.
struct DegreeWindow {
  int lo = 0;
  int hi = 1 << 20;
};

// Enumerates all ways to write `total` as an ordered sum of `k` parts, each
// part zero, an exceptional multiple, or an effective mixed class, with part
// i's anticanonical degree inside windows[i].  Calls `cb` with the parts.
void enumerate_assignments(
    const Surface& s, const CurveVec& total,
    const std::vector<DegreeWindow>& windows,
    const std::function<void(const std::vector<CurveClass>&)>& cb);

// Convenience: all two-part splits (beta1, beta2).
std::vector<std::pair<CurveClass, CurveClass>> two_part_splits(
    const Surface& s, const CurveVec& total, const DegreeWindow& first);

}  // namespace gw
