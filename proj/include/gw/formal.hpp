#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gw/rational.hpp"
#include "gw/surface.hpp"

namespace gw {

// One insertion tau_psi(basis class).  Scalars are factored out into the
// ambient coefficient, so a class here is always a single basis element.
struct Insertion {
  int psi = 0;
  int cls = 0;  // basis index

  bool operator<(const Insertion& o) const {
    if (psi != o.psi) return psi < o.psi;
    return cls < o.cls;
  }
  bool operator==(const Insertion& o) const {
    return psi == o.psi && cls == o.cls;
  }
};

// A formal Gromov-Witten invariant <tau_{k_1}(b_1)...>_{g,beta} with basis
// class insertions, canonically sorted.
struct FormalInvariant {
  int g = 0;
  CurveVec beta;
  std::vector<Insertion> ins;  // kept sorted

  void normalize() { std::sort(ins.begin(), ins.end()); }

  bool operator<(const FormalInvariant& o) const {
    if (g != o.g) return g < o.g;
    if (!(beta == o.beta)) return beta < o.beta;
    return ins < o.ins;
  }
  bool operator==(const FormalInvariant& o) const {
    return g == o.g && beta == o.beta && ins == o.ins;
  }

  std::string str(const Surface& s) const {
    std::ostringstream os;
    os << "<";
    for (size_t i = 0; i < ins.size(); ++i) {
      if (i) os << " ";
      if (ins[i].psi)
        os << "t" << ins[i].psi << "(" << s.basis_name(ins[i].cls) << ")";
      else
        os << s.basis_name(ins[i].cls);
    }
    os << ">_" << g << ",(" << beta.d;
    for (int x : beta.a) os << "," << x;
    os << ")";
    return os.str();
  }
};

// Product monomial of formal invariants (unordered).
using FormalMonomial = std::vector<FormalInvariant>;

inline void normalize(FormalMonomial& m) { std::sort(m.begin(), m.end()); }

// Rational linear combination of monomials.
struct FormalPolynomial {
  std::map<FormalMonomial, Rat> terms;

  void add(FormalMonomial m, const Rat& c) {
    if (c == 0) return;
    normalize(m);
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(std::move(m), c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
  void add(const FormalPolynomial& p, const Rat& scale = Rat(1)) {
    for (const auto& [m, c] : p.terms) add(m, c * scale);
  }
  bool empty() const { return terms.empty(); }
};

// Multiply two polynomials (concatenating monomials).
inline FormalPolynomial operator*(const FormalPolynomial& a,
                                  const FormalPolynomial& b) {
  FormalPolynomial out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      FormalMonomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add(std::move(m), ca * cb);
    }
  }
  return out;
}

}  // namespace gw
