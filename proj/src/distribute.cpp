#include "gw/distribute.hpp"

#include <algorithm>

namespace gw {
namespace {

// Candidate classes for one part given what is still available.
// `last` parts must consume the remainder exactly.
void candidates(const Surface& s, const CurveVec& rem, const DegreeWindow& w,
                bool last, const std::function<void(const CurveClass&)>& cb) {
  int r = int(rem.a.size());
  if (last) {
    auto cls = s.classify(rem);
    if (cls) {
      int ad = s.anticanonical_degree(rem);
      if (ad >= w.lo && ad <= w.hi) cb(*cls);
    }
    return;
  }
  // zero part
  if (0 >= w.lo && 0 <= w.hi) cb(CurveClass::make_zero());
  // exceptional parts mE_i: anticanonical degree m
  for (int i = 1; i <= r; ++i) {
    for (int m = std::max(1, w.lo); m <= w.hi; ++m) {
      // the remainder gains +m at index i; a later mixed part can absorb at
      // most its d there, so require rem.a[i-1] + m <= rem.d (total d left)
      if (rem.a[size_t(i) - 1] + m > rem.d) break;
      cb(CurveClass::make_exceptional(i, m));
    }
  }
  // mixed parts dH - sum b_i E_i, 1 <= d1 <= rem.d, 0 <= b_i <= min(d1, ...)
  for (int d1 = 1; d1 <= rem.d; ++d1) {
    // sum(b) = 3*d1 - antideg, with antideg in the window
    int lo_sum = std::max(0, 3 * d1 - w.hi);
    int hi_sum = 3 * d1 - w.lo;
    if (hi_sum < lo_sum) continue;
    std::vector<int> b(size_t(r), 0);
    std::function<void(int, int)> rec = [&](int i, int sum) {
      if (sum > hi_sum) return;
      if (i == r) {
        if (sum < lo_sum) return;
        cb(CurveClass::make_mixed(d1, b));
        return;
      }
      // b_i <= d1 and the remainder must stay absorbable: rem.a[i] - b_i can
      // be anything >= -(rem.d - d1) roughly (later parts can add back via
      // exceptional); keep the cheap cap b_i <= d1.
      int cap = std::min(d1, hi_sum - sum);
      for (int v = 0; v <= cap; ++v) {
        b[size_t(i)] = v;
        rec(i + 1, sum + v);
      }
      b[size_t(i)] = 0;
    };
    rec(0, 0);
  }
}

void rec_assign(const Surface& s, const CurveVec& rem,
                const std::vector<DegreeWindow>& windows, size_t idx,
                std::vector<CurveClass>& acc,
                const std::function<void(const std::vector<CurveClass>&)>& cb) {
  size_t k = windows.size();
  if (idx + 1 == k) {
    candidates(s, rem, windows[idx], true, [&](const CurveClass& c) {
      acc.push_back(c);
      cb(acc);
      acc.pop_back();
    });
    return;
  }
  // feasibility: remaining windows must be able to absorb rem's antideg
  int ad = s.anticanonical_degree(rem);
  long lo = 0, hi = 0;
  for (size_t j = idx; j < k; ++j) {
    lo += windows[j].lo;
    hi += windows[j].hi;
  }
  if (ad < lo || ad > hi) return;

  candidates(s, rem, windows[idx], false, [&](const CurveClass& c) {
    CurveVec v = s.to_vec(c);
    CurveVec next = rem - v;
    if (next.d < 0) return;
    acc.push_back(c);
    rec_assign(s, next, windows, idx + 1, acc, cb);
    acc.pop_back();
  });
}

}  // namespace

void enumerate_assignments(
    const Surface& s, const CurveVec& total,
    const std::vector<DegreeWindow>& windows,
    const std::function<void(const std::vector<CurveClass>&)>& cb) {
  if (windows.empty()) return;
  std::vector<CurveClass> acc;
  rec_assign(s, total, windows, 0, acc, cb);
}

std::vector<std::pair<CurveClass, CurveClass>> two_part_splits(
    const Surface& s, const CurveVec& total, const DegreeWindow& first) {
  std::vector<std::pair<CurveClass, CurveClass>> out;
  enumerate_assignments(s, total, {first, DegreeWindow{0, 1 << 20}},
                        [&](const std::vector<CurveClass>& parts) {
                          out.push_back({parts[0], parts[1]});
                        });
  return out;
}

}  // namespace gw
