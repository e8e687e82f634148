#include "gw/surface.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gw {

CurveClass CurveClass::make_mixed(int d, std::vector<int> alpha) {
  if (d < 1) throw std::invalid_argument("mixed curve class needs d >= 1");
  CurveClass b;
  b.kind = Kind::mixed;
  b.d = d;
  b.alpha = std::move(alpha);
  return b;
}

CurveClass CurveClass::make_exceptional(int i, int m) {
  if (i < 1 || m < 1) throw std::invalid_argument("bad exceptional class");
  CurveClass b;
  b.kind = Kind::exceptional;
  b.idx = i;
  b.mult = m;
  return b;
}

bool CurveClass::operator==(const CurveClass& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::zero: return true;
    case Kind::mixed: return d == o.d && alpha == o.alpha;
    case Kind::exceptional: return idx == o.idx && mult == o.mult;
  }
  return false;
}

std::string CurveClass::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero: os << "0"; break;
    case Kind::exceptional: os << mult << "E" << idx; break;
    case Kind::mixed: {
      os << d << "H";
      for (size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0) os << "-" << alpha[i] << "E" << (i + 1);
      break;
    }
  }
  return os.str();
}

bool CurveVec::is_zero() const {
  if (d != 0) return false;
  return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

CurveVec CurveVec::operator+(const CurveVec& o) const {
  CurveVec s;
  s.d = d + o.d;
  s.a.resize(std::max(a.size(), o.a.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) s.a[i] += a[i];
  for (size_t i = 0; i < o.a.size(); ++i) s.a[i] += o.a[i];
  return s;
}

CurveVec CurveVec::operator-(const CurveVec& o) const {
  CurveVec s;
  s.d = d - o.d;
  s.a.resize(std::max(a.size(), o.a.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) s.a[i] += a[i];
  for (size_t i = 0; i < o.a.size(); ++i) s.a[i] -= o.a[i];
  return s;
}

Surface::Surface(int r) : r_(r) {
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  // Inverse of the intersection matrix: (1,pt) off-diagonal block, H self-dual,
  // E_i self-paired with -1.
  diag_.push_back({unit_idx(), pt_idx(), Rat(1)});
  diag_.push_back({pt_idx(), unit_idx(), Rat(1)});
  diag_.push_back({h_idx(), h_idx(), Rat(1)});
  for (int i = 1; i <= r_; ++i) diag_.push_back({e_idx(i), e_idx(i), Rat(-1)});
}

std::string Surface::basis_name(int b) const {
  if (b == unit_idx()) return "1";
  if (b == h_idx()) return "H";
  if (b == pt_idx()) return "pt";
  return "E" + std::to_string(e_number(b));
}

CohomologyClass Surface::basis_class(int b) const {
  CohomologyClass x;
  x.deg = complex_deg(b);
  x.c.assign(basis_size(), Rat(0));
  x.c[b] = 1;
  return x;
}

std::vector<CohomologyClass> Surface::basis() const {
  std::vector<CohomologyClass> out;
  for (int b = 0; b < basis_size(); ++b) out.push_back(basis_class(b));
  return out;
}

std::pair<Rat, int> Surface::cup_basis(int bx, int by) const {
  int dx = complex_deg(bx), dy = complex_deg(by);
  if (dx + dy > 2) return {Rat(0), 0};
  if (bx == unit_idx()) return {Rat(1), by};
  if (by == unit_idx()) return {Rat(1), bx};
  // both degree 1
  if (bx == h_idx() && by == h_idx()) return {Rat(1), pt_idx()};
  if (is_e_idx(bx) && is_e_idx(by) && bx == by) return {Rat(-1), pt_idx()};
  return {Rat(0), 0};
}

CohomologyClass Surface::cup(const CohomologyClass& x,
                             const CohomologyClass& y) const {
  CohomologyClass out;
  out.deg = x.deg + y.deg;
  out.c.assign(basis_size(), Rat(0));
  if (out.deg > 2) {
    out.deg = 2;  // normalized zero of top degree
    return out;
  }
  for (int bx = 0; bx < basis_size(); ++bx) {
    if (x.c[bx] == 0) continue;
    for (int by = 0; by < basis_size(); ++by) {
      if (y.c[by] == 0) continue;
      auto [s, b] = cup_basis(bx, by);
      if (s != 0) out.c[b] += s * x.c[bx] * y.c[by];
    }
  }
  return out;
}

Rat Surface::pair_basis(int bx, int by) const {
  if (complex_deg(bx) + complex_deg(by) != 2) return Rat(0);
  auto [s, b] = cup_basis(bx, by);
  if (s == 0 || b != pt_idx()) {
    // unit against pt
    if ((bx == unit_idx() && by == pt_idx()) ||
        (bx == pt_idx() && by == unit_idx()))
      return Rat(1);
    return s == 0 ? Rat(0) : s;
  }
  return s;
}

Rat Surface::pair(const CohomologyClass& x, const CohomologyClass& y) const {
  Rat out(0);
  for (int bx = 0; bx < basis_size(); ++bx) {
    if (x.c[bx] == 0) continue;
    for (int by = 0; by < basis_size(); ++by) {
      if (y.c[by] == 0) continue;
      out += x.c[bx] * y.c[by] * pair_basis(bx, by);
    }
  }
  return out;
}

Rat Surface::degree_on_curve_basis(int b, const CurveVec& beta) const {
  // integral over dH - sum a_i E_i:  H contributes d, E_i contributes a_i.
  if (b == h_idx()) return Rat(beta.d);
  if (is_e_idx(b)) {
    size_t i = size_t(e_number(b)) - 1;
    return i < beta.a.size() ? Rat(beta.a[i]) : Rat(0);
  }
  return Rat(0);
}

Rat Surface::degree_on_curve(const CohomologyClass& div,
                             const CurveClass& beta) const {
  if (div.deg != 1) throw std::invalid_argument("degree_on_curve needs a divisor");
  CurveVec v = to_vec(beta);
  Rat out(0);
  for (int b = 0; b < basis_size(); ++b)
    if (div.c[b] != 0) out += div.c[b] * degree_on_curve_basis(b, v);
  return out;
}

int Surface::anticanonical_degree(const CurveVec& beta) const {
  int s = 3 * beta.d;
  for (int ai : beta.a) s -= ai;
  return s;
}

int Surface::anticanonical_degree(const CurveClass& beta) const {
  return anticanonical_degree(to_vec(beta));
}

int Surface::expected_dim(int g, const CurveVec& beta, int n) const {
  return anticanonical_degree(beta) + g - 1 + n;
}

int Surface::expected_dim(int g, const CurveClass& beta, int n) const {
  return expected_dim(g, to_vec(beta), n);
}

bool Surface::is_effective(const CurveClass& beta) const {
  switch (beta.kind) {
    case CurveClass::Kind::zero: return true;
    case CurveClass::Kind::exceptional:
      return beta.idx >= 1 && beta.idx <= r_ && beta.mult >= 1;
    case CurveClass::Kind::mixed: {
      if (beta.d < 1) return false;
      for (int ai : beta.alpha)
        if (ai < 0 || ai > beta.d) return false;
      return true;
    }
  }
  return false;
}

std::optional<CurveClass> Surface::classify(const CurveVec& v) const {
  if (v.is_zero()) return CurveClass::make_zero();
  if (v.d == 0) {
    // pure exceptional multiple: exactly one index with a_i = -m < 0
    int idx = 0, m = 0;
    for (size_t i = 0; i < v.a.size(); ++i) {
      if (v.a[i] == 0) continue;
      if (v.a[i] > 0 || idx != 0) return std::nullopt;
      idx = int(i) + 1;
      m = -v.a[i];
    }
    if (idx == 0) return std::nullopt;
    return CurveClass::make_exceptional(idx, m);
  }
  if (v.d < 0) return std::nullopt;
  for (int ai : v.a)
    if (ai < 0 || ai > v.d) return std::nullopt;
  std::vector<int> alpha(v.a);
  alpha.resize(size_t(r_), 0);
  return CurveClass::make_mixed(v.d, alpha);
}

CurveVec Surface::to_vec(const CurveClass& beta) const {
  CurveVec v;
  v.a.assign(size_t(r_), 0);
  switch (beta.kind) {
    case CurveClass::Kind::zero: break;
    case CurveClass::Kind::mixed:
      v.d = beta.d;
      for (size_t i = 0; i < beta.alpha.size() && i < v.a.size(); ++i)
        v.a[i] = beta.alpha[i];
      break;
    case CurveClass::Kind::exceptional:
      v.a.at(size_t(beta.idx) - 1) = -beta.mult;
      break;
  }
  return v;
}

CohomologyClass Surface::anticanonical() const {
  CohomologyClass k;
  k.deg = 1;
  k.c.assign(basis_size(), Rat(0));
  k.c[h_idx()] = 3;
  for (int i = 1; i <= r_; ++i) k.c[e_idx(i)] = -1;
  return k;
}

}  // namespace gw
