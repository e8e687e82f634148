#include "gw/reduce.hpp"

#include <algorithm>
#include <iostream>

#include "gw/distribute.hpp"

namespace gw {

namespace {

int insertion_degree(const Surface& s, const std::vector<Insertion>& ins) {
  int t = 0;
  for (const auto& i : ins) t += s.complex_deg(i.cls) + i.psi;
  return t;
}

}  // namespace

InvariantKey InvariantKey::make(char type, int g, int d,
                                std::vector<int> alpha) {
  InvariantKey k;
  k.type = type;
  k.g = g;
  k.d = d;
  if (type == 'K') {
    // first entry pinned to the tau_1(E) index, rest sorted descending
    std::vector<int> rest(alpha.begin() + (alpha.empty() ? 0 : 1), alpha.end());
    std::sort(rest.begin(), rest.end(), std::greater<int>());
    while (!rest.empty() && rest.back() == 0) rest.pop_back();
    k.alpha.clear();
    if (!alpha.empty()) k.alpha.push_back(alpha[0]);
    k.alpha.insert(k.alpha.end(), rest.begin(), rest.end());
  } else {
    std::sort(alpha.begin(), alpha.end(), std::greater<int>());
    while (!alpha.empty() && alpha.back() == 0) alpha.pop_back();
    k.alpha = std::move(alpha);
  }
  return k;
}

int InvariantKey::alpha_sum() const {
  int s = 0;
  for (int x : alpha) s += x;
  return s;
}

int InvariantKey::points() const {
  switch (type) {
    case 'N': return 3 * d - alpha_sum() + g - 1;
    case 'H': return 3 * d - alpha_sum();
    case 'P': return 3 * d - alpha_sum() - 1;
    case 'K': return 3 * d - alpha_sum();
  }
  return 0;
}

bool InvariantKey::valid() const {
  if (d < 1) return false;
  for (int x : alpha)
    if (x < 0 || x > d) return false;
  if (points() < 0) return false;
  if (type != 'N' && g != 2) return false;
  if (type == 'K' && alpha.empty()) return false;
  return true;
}

std::string InvariantKey::str() const {
  std::string s;
  s += type;
  s += "(" + std::to_string(g) + ")_" + std::to_string(d) + ",(";
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alpha[i]);
  }
  s += ")";
  return s;
}

KeyPolynomial operator*(const KeyPolynomial& a, const KeyPolynomial& b) {
  KeyPolynomial out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      KeyMonomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add(std::move(m), ca * cb);
    }
  }
  return out;
}

const KeyPolynomial& Reducer::reduce(const FormalInvariant& inv) {
  FormalInvariant key = inv;
  key.normalize();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  KeyPolynomial v = reduce_uncached(key);
  return cache_.emplace(std::move(key), std::move(v)).first->second;
}

KeyPolynomial Reducer::reduce(const FormalPolynomial& poly) {
  KeyPolynomial out;
  for (const auto& [mono, c] : poly.terms) {
    KeyPolynomial prod = KeyPolynomial::constant(Rat(1));
    for (const auto& f : mono) {
      prod = prod * reduce(f);
      if (prod.empty()) break;
    }
    out.add(prod, c);
  }
  return out;
}

KeyPolynomial Reducer::reduce_uncached(const FormalInvariant& inv) {
  // dimension admissibility
  int n = int(inv.ins.size());
  int vdim = s_.expected_dim(inv.g, inv.beta, n);
  if (insertion_degree(s_, inv.ins) != vdim) return {};

  auto cls = s_.classify(inv.beta);
  if (!cls) return {};
  switch (cls->kind) {
    case CurveClass::Kind::zero:
      return KeyPolynomial::constant(eval_degree_zero(inv.g, inv.ins));
    case CurveClass::Kind::exceptional:
      return KeyPolynomial::constant(
          eval_exceptional(inv.g, cls->idx, cls->mult, inv.ins));
    case CurveClass::Kind::mixed:
      return reduce_mixed(inv);
  }
  return {};
}

KeyPolynomial Reducer::reduce_mixed(const FormalInvariant& inv) {
  const auto& ins = inv.ins;
  // string
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && ins[i].cls == s_.unit_idx()) {
      KeyPolynomial out;
      for (size_t j = 0; j < ins.size(); ++j) {
        if (j == i || ins[j].psi == 0) continue;
        FormalInvariant next(inv);
        next.ins[j].psi -= 1;
        next.ins.erase(next.ins.begin() + long(i));
        out.add(reduce(next));
      }
      return out;
    }
  }
  // dilaton
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 1 && ins[i].cls == s_.unit_idx()) {
      FormalInvariant next(inv);
      next.ins.erase(next.ins.begin() + long(i));
      int nrest = int(next.ins.size());
      KeyPolynomial out;
      out.add(reduce(next), Rat(2 * inv.g - 2 + nrest));
      return out;
    }
  }
  // divisor
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && s_.complex_deg(ins[i].cls) == 1) {
      int D = ins[i].cls;
      FormalInvariant rest(inv);
      rest.ins.erase(rest.ins.begin() + long(i));
      KeyPolynomial out;
      out.add(reduce(rest), s_.degree_on_curve_basis(D, inv.beta));
      for (size_t j = 0; j < rest.ins.size(); ++j) {
        if (rest.ins[j].psi == 0) continue;
        auto [sc, b] = s_.cup_basis(rest.ins[j].cls, D);
        if (sc == 0) continue;
        FormalInvariant corr(rest);
        corr.ins[j].psi -= 1;
        corr.ins[j].cls = b;
        out.add(reduce(corr), sc);
      }
      return out;
    }
  }
  // descendants of genus <= 1 reduce via topological recursion
  if (inv.g <= 1) {
    for (size_t i = 0; i < ins.size(); ++i) {
      if (ins[i].psi >= 1) {
        return inv.g == 0 ? trr_genus0(inv, i) : trr_genus1(inv, i);
      }
    }
  }
  // taxonomy shapes
  int descendants = 0;
  size_t dslot = 0;
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi >= 1) {
      ++descendants;
      dslot = i;
    } else if (ins[i].cls != s_.pt_idx()) {
      // only pt primaries remain after string/divisor
      return {};
    }
  }
  int d = inv.beta.d;
  std::vector<int> alpha = inv.beta.a;
  if (descendants == 0) {
    KeyPolynomial out;
    out.add({InvariantKey::make('N', inv.g, d, alpha)}, Rat(1));
    return out;
  }
  if (inv.g == 2 && descendants == 1 && ins[dslot].psi == 1) {
    int c = ins[dslot].cls;
    if (c == s_.h_idx()) {
      KeyPolynomial out;
      out.add({InvariantKey::make('H', 2, d, alpha)}, Rat(1));
      return out;
    }
    if (c == s_.pt_idx()) {
      KeyPolynomial out;
      out.add({InvariantKey::make('P', 2, d, alpha)}, Rat(1));
      return out;
    }
    if (s_.is_e_idx(c)) {
      int j = s_.e_number(c);
      std::vector<int> a = alpha;
      a.resize(std::max(a.size(), size_t(j)), 0);
      std::swap(a[0], a[size_t(j) - 1]);
      KeyPolynomial out;
      out.add({InvariantKey::make('K', 2, d, a)}, Rat(1));
      return out;
    }
  }
  throw NonTaxonomyError("non-taxonomy invariant: " + inv.str(s_));
}

KeyPolynomial Reducer::trr_genus0(const FormalInvariant& inv, size_t slot) {
  if (inv.ins.size() < 3) return divisor_lift(inv, slot);
  // fixed reference pair: the first two non-slot insertions
  std::vector<Insertion> others;
  for (size_t i = 0; i < inv.ins.size(); ++i)
    if (i != slot) others.push_back(inv.ins[i]);
  Insertion o1 = others[0], o2 = others[1];
  std::vector<Insertion> rest(others.begin() + 2, others.end());
  Insertion head{inv.ins[slot].psi - 1, inv.ins[slot].cls};

  KeyPolynomial out;
  int m = int(rest.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<Insertion> insA = {head};
    std::vector<Insertion> insB = {o1, o2};
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i))
        insA.push_back(rest[size_t(i)]);
      else
        insB.push_back(rest[size_t(i)]);
    }
    int nA = int(insA.size()) + 1;
    int degA = insertion_degree(s_, insA);
    DegreeWindow w{degA + 1 - nA, degA + 2 + 1 - nA};
    for (auto& [b1, b2] : two_part_splits(s_, inv.beta, w)) {
      if (b1.kind == CurveClass::Kind::zero && nA < 3) continue;
      for (const auto& dt : s_.diagonal_terms()) {
        FormalInvariant A;
        A.g = 0;
        A.beta = s_.to_vec(b1);
        A.ins = insA;
        A.ins.push_back({0, dt.e});
        FormalInvariant B;
        B.g = 0;
        B.beta = s_.to_vec(b2);
        B.ins = insB;
        B.ins.push_back({0, dt.f});
        auto ra = reduce(A);
        if (ra.empty()) continue;
        auto rb = reduce(B);
        if (rb.empty()) continue;
        out.add(ra * rb, dt.weight);
      }
    }
  }
  return out;
}

KeyPolynomial Reducer::trr_genus1(const FormalInvariant& inv, size_t slot) {
  std::vector<Insertion> others;
  for (size_t i = 0; i < inv.ins.size(); ++i)
    if (i != slot) others.push_back(inv.ins[i]);
  Insertion head{inv.ins[slot].psi - 1, inv.ins[slot].cls};

  KeyPolynomial out;
  int m = int(others.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<Insertion> insA = {head};
    std::vector<Insertion> insB;
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i))
        insA.push_back(others[size_t(i)]);
      else
        insB.push_back(others[size_t(i)]);
    }
    int nA = int(insA.size()) + 1;
    int degA = insertion_degree(s_, insA);
    DegreeWindow w{degA + 1 - nA, degA + 2 + 1 - nA};
    for (auto& [b1, b2] : two_part_splits(s_, inv.beta, w)) {
      if (b1.kind == CurveClass::Kind::zero && nA < 3) continue;
      for (const auto& dt : s_.diagonal_terms()) {
        FormalInvariant A;
        A.g = 0;
        A.beta = s_.to_vec(b1);
        A.ins = insA;
        A.ins.push_back({0, dt.e});
        FormalInvariant B;
        B.g = 1;
        B.beta = s_.to_vec(b2);
        B.ins = insB;
        B.ins.push_back({0, dt.f});
        auto ra = reduce(A);
        if (ra.empty()) continue;
        auto rb = reduce(B);
        if (rb.empty()) continue;
        out.add(ra * rb, dt.weight);
      }
    }
  }
  // contracted genus: one vertex of genus 0 carrying beta with the diagonal
  // inserted twice, weighted 1/24
  for (const auto& dt : s_.diagonal_terms()) {
    FormalInvariant C;
    C.g = 0;
    C.beta = inv.beta;
    C.ins = {head};
    C.ins.insert(C.ins.end(), others.begin(), others.end());
    C.ins.push_back({0, dt.e});
    C.ins.push_back({0, dt.f});
    out.add(reduce(C), dt.weight / 24);
  }
  return out;
}

KeyPolynomial Reducer::divisor_lift(const FormalInvariant& inv, size_t slot) {
  // <X> = ( <tau_0(H) X> - corrections ) / deg_H(beta)
  Rat deg = s_.degree_on_curve_basis(s_.h_idx(), inv.beta);
  if (deg == 0) return {};  // mixed classes have d >= 1, cannot happen
  FormalInvariant big(inv);
  big.ins.push_back({0, s_.h_idx()});
  size_t bigslot = slot;
  KeyPolynomial out;
  // big is reduced by TRR directly (lifting again if still too short),
  // routing around the divisor extraction to avoid recursing back here
  KeyPolynomial bigred = big.ins.size() >= 3 ? trr_genus0(big, bigslot)
                                             : divisor_lift(big, bigslot);
  out.add(bigred, Rat(1) / deg);
  for (size_t j = 0; j < inv.ins.size(); ++j) {
    if (inv.ins[j].psi == 0) continue;
    auto [sc, b] = s_.cup_basis(inv.ins[j].cls, s_.h_idx());
    if (sc == 0) continue;
    FormalInvariant corr(inv);
    corr.ins[j].psi -= 1;
    corr.ins[j].cls = b;
    out.add(reduce(corr), -sc / deg);
  }
  return out;
}

Rat Reducer::eval_degree_zero(int g, std::vector<Insertion> ins) {
  int n = int(ins.size());
  CurveVec zero;
  zero.a.assign(size_t(s_.r()), 0);
  if (insertion_degree(s_, ins) != s_.expected_dim(g, zero, n)) return Rat(0);
  if (2 * g - 2 + n <= 0) return Rat(0);

  if (g == 0) {
    if (n == 3) {
      bool pure = true;
      for (auto& i : ins)
        if (i.psi) pure = false;
      if (!pure) return Rat(0);
      auto [s1, b1] = s_.cup_basis(ins[0].cls, ins[1].cls);
      if (s1 == 0) return Rat(0);
      return s1 * s_.pair_basis(b1, ins[2].cls);
    }
  }
  if (g == 1 && n == 1) {
    if (ins[0].psi == 1 && ins[0].cls == s_.unit_idx())
      return Rat(-s_.chi(), 24);
    if (ins[0].psi == 0 && s_.complex_deg(ins[0].cls) == 1)
      return -s_.pair(s_.anticanonical(), s_.basis_class(ins[0].cls)) / 24;
    return Rat(0);
  }
  if (g == 2 && n == 1) {
    if (ins[0].psi == 1 && s_.complex_deg(ins[0].cls) == 1)
      return -s_.pair(s_.anticanonical(), s_.basis_class(ins[0].cls)) / 2880;
    if (ins[0].psi >= 2) {
      static bool warned = false;
      if (!warned) {
        std::cerr << "warning: degree-0 genus-2 descendant of order >= 2 "
                     "assumed zero\n";
        warned = true;
      }
    }
    return Rat(0);
  }

  // reductions (exact for beta = 0 whenever both sides' moduli exist, which
  // the n-counting above guarantees)
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && ins[i].cls == s_.unit_idx()) {
      Rat out(0);
      for (size_t j = 0; j < ins.size(); ++j) {
        if (j == i || ins[j].psi == 0) continue;
        auto next = ins;
        next[j].psi -= 1;
        next.erase(next.begin() + long(i));
        out += eval_degree_zero(g, next);
      }
      return out;
    }
  }
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 1 && ins[i].cls == s_.unit_idx()) {
      auto next = ins;
      next.erase(next.begin() + long(i));
      return Rat(2 * g - 2 + int(next.size())) * eval_degree_zero(g, next);
    }
  }
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && s_.complex_deg(ins[i].cls) == 1) {
      int D = ins[i].cls;
      auto rest = ins;
      rest.erase(rest.begin() + long(i));
      Rat out(0);  // degree term vanishes on beta = 0
      for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j].psi == 0) continue;
        auto [sc, b] = s_.cup_basis(rest[j].cls, D);
        if (sc == 0) continue;
        auto corr = rest;
        corr[j].psi -= 1;
        corr[j].cls = b;
        out += sc * eval_degree_zero(g, corr);
      }
      return out;
    }
  }
  return Rat(0);
}

Rat Reducer::eval_exceptional(int g, int idx, int mult,
                              std::vector<Insertion> ins) {
  CurveVec beta;
  beta.a.assign(size_t(s_.r()), 0);
  beta.a[size_t(idx) - 1] = -mult;
  int n = int(ins.size());
  if (insertion_degree(s_, ins) != s_.expected_dim(g, beta, n)) return Rat(0);

  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && ins[i].cls == s_.unit_idx()) {
      Rat out(0);
      for (size_t j = 0; j < ins.size(); ++j) {
        if (j == i || ins[j].psi == 0) continue;
        auto next = ins;
        next[j].psi -= 1;
        next.erase(next.begin() + long(i));
        out += eval_exceptional(g, idx, mult, next);
      }
      return out;
    }
  }
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 1 && ins[i].cls == s_.unit_idx()) {
      auto next = ins;
      next.erase(next.begin() + long(i));
      return Rat(2 * g - 2 + int(next.size())) *
             eval_exceptional(g, idx, mult, next);
    }
  }
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].psi == 0 && s_.complex_deg(ins[i].cls) == 1) {
      int D = ins[i].cls;
      auto rest = ins;
      rest.erase(rest.begin() + long(i));
      Rat out = s_.degree_on_curve_basis(D, beta) *
                eval_exceptional(g, idx, mult, rest);
      for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j].psi == 0) continue;
        auto [sc, b] = s_.cup_basis(rest[j].cls, D);
        if (sc == 0) continue;
        auto corr = rest;
        corr[j].psi -= 1;
        corr[j].cls = b;
        out += sc * eval_exceptional(g, idx, mult, corr);
      }
      return out;
    }
  }
  if (ins.empty() && g == 0 && mult == 1) return Rat(1);
  return Rat(0);
}

FormalPolynomial Reducer::apply_string(const FormalInvariant& inv) {
  size_t slot = inv.ins.size();
  for (size_t i = 0; i < inv.ins.size(); ++i)
    if (inv.ins[i].psi == 0 && inv.ins[i].cls == s_.unit_idx()) slot = i;
  if (slot == inv.ins.size())
    throw std::invalid_argument("apply_string: no tau_0(1) insertion");
  FormalPolynomial out;
  int nrest = int(inv.ins.size()) - 1;
  if (inv.beta.is_zero() &&
      ((inv.g == 0 && nrest <= 2) || (inv.g == 1 && nrest == 0))) {
    out.add(FormalMonomial{}, eval_degree_zero(inv.g, inv.ins));
    return out;
  }
  for (size_t j = 0; j < inv.ins.size(); ++j) {
    if (j == slot || inv.ins[j].psi == 0) continue;
    FormalInvariant next(inv);
    next.ins[j].psi -= 1;
    next.ins.erase(next.ins.begin() + long(slot));
    next.normalize();
    out.add({next}, Rat(1));
  }
  return out;
}

FormalPolynomial Reducer::apply_divisor(const FormalInvariant& inv,
                                        size_t slot) {
  if (slot >= inv.ins.size() || inv.ins[slot].psi != 0 ||
      s_.complex_deg(inv.ins[slot].cls) != 1)
    throw std::invalid_argument("apply_divisor: slot is not tau_0(divisor)");
  FormalPolynomial out;
  int nrest = int(inv.ins.size()) - 1;
  if (inv.beta.is_zero() &&
      ((inv.g == 0 && nrest <= 2) || (inv.g == 1 && nrest == 0))) {
    out.add(FormalMonomial{}, eval_degree_zero(inv.g, inv.ins));
    return out;
  }
  int D = inv.ins[slot].cls;
  FormalInvariant rest(inv);
  rest.ins.erase(rest.ins.begin() + long(slot));
  FormalInvariant restN = rest;
  restN.normalize();
  out.add({restN}, s_.degree_on_curve_basis(D, inv.beta));
  for (size_t j = 0; j < rest.ins.size(); ++j) {
    if (rest.ins[j].psi == 0) continue;
    auto [sc, b] = s_.cup_basis(rest.ins[j].cls, D);
    if (sc == 0) continue;
    FormalInvariant corr(rest);
    corr.ins[j].psi -= 1;
    corr.ins[j].cls = b;
    corr.normalize();
    out.add({corr}, sc);
  }
  return out;
}

FormalPolynomial Reducer::apply_dilaton(const FormalInvariant& inv) {
  size_t slot = inv.ins.size();
  for (size_t i = 0; i < inv.ins.size(); ++i)
    if (inv.ins[i].psi == 1 && inv.ins[i].cls == s_.unit_idx()) slot = i;
  if (slot == inv.ins.size())
    throw std::invalid_argument("apply_dilaton: no tau_1(1) insertion");
  FormalPolynomial out;
  int nrest = int(inv.ins.size()) - 1;
  if (inv.beta.is_zero() && inv.g == 1 && nrest == 0) {
    out.add(FormalMonomial{}, Rat(-s_.chi(), 24));
    return out;
  }
  FormalInvariant next(inv);
  next.ins.erase(next.ins.begin() + long(slot));
  next.normalize();
  out.add({next}, Rat(2 * inv.g - 2 + nrest));
  return out;
}

}  // namespace gw
