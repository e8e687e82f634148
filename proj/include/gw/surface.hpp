#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gw/rational.hpp"

namespace gw {

// Homogeneous cohomology class of X_r, stored as coefficients over the basis
// (1, H, E_1..E_r, pt).  Basis index: 0 = unit, 1 = H, 1+i = E_i, r+2 = pt.
struct CohomologyClass {
  int deg = 0;  // complex degree: 0, 1 or 2
  std::vector<Rat> c;

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return true;
    return false;
  }
};

// A degree-2 homology class of X_r.  `mixed(d, alpha)` stands for
// dH - sum alpha_i E_i; `exceptional(i, m)` for m*E_i; plus the zero class.
struct CurveClass {
  enum class Kind { zero, mixed, exceptional };
  Kind kind = Kind::zero;
  int d = 0;
  std::vector<int> alpha;  // length r for mixed
  int idx = 0;             // 1-based blowup index for exceptional
  int mult = 0;

  static CurveClass make_zero() { return CurveClass{}; }
  static CurveClass make_mixed(int d, std::vector<int> alpha);
  static CurveClass make_exceptional(int i, int m);

  bool operator==(const CurveClass& o) const;
  std::string str() const;
};

// Integer lattice vector (d; a_1..a_r) representing dH - sum a_i E_i.
// Additive form used by degree distribution; a_i may be negative
// (exceptional multiples have a_i = -m).
struct CurveVec {
  int d = 0;
  std::vector<int> a;

  CurveVec() = default;
  CurveVec(int d_, std::vector<int> a_) : d(d_), a(std::move(a_)) {}
  bool is_zero() const;
  CurveVec operator+(const CurveVec& o) const;
  CurveVec operator-(const CurveVec& o) const;
  bool operator==(const CurveVec& o) const { return d == o.d && a == o.a; }
  bool operator<(const CurveVec& o) const {
    if (d != o.d) return d < o.d;
    return a < o.a;
  }
};

// The cohomology ring of X_r together with intersection data.  Immutable.
class Surface {
 public:
  explicit Surface(int r);

  int r() const { return r_; }
  int basis_size() const { return r_ + 3; }

  int unit_idx() const { return 0; }
  int h_idx() const { return 1; }
  int e_idx(int i) const { return 1 + i; }  // i in 1..r
  int pt_idx() const { return r_ + 2; }
  bool is_e_idx(int b) const { return b >= 2 && b <= r_ + 1; }
  int e_number(int b) const { return b - 1; }  // basis index -> blowup index

  int complex_deg(int b) const { return b == 0 ? 0 : (b == pt_idx() ? 2 : 1); }
  std::string basis_name(int b) const;

  CohomologyClass basis_class(int b) const;
  std::vector<CohomologyClass> basis() const;

  CohomologyClass cup(const CohomologyClass& x, const CohomologyClass& y) const;
  Rat pair(const CohomologyClass& x, const CohomologyClass& y) const;

  // Basis-level cup: E_i cup E_j = -delta_ij pt etc.  Returns scalar s and
  // basis index b with x cup y = s*b, or s = 0.
  std::pair<Rat, int> cup_basis(int bx, int by) const;
  Rat pair_basis(int bx, int by) const;

  struct DiagonalTerm {
    int e, f;  // basis indices
    Rat weight;
  };
  // Terms of the diagonal decomposition: sum w * T_e (x) T_f.
  const std::vector<DiagonalTerm>& diagonal_terms() const { return diag_; }

  // integral of a degree-2 divisor class over a curve class
  Rat degree_on_curve(const CohomologyClass& div, const CurveClass& beta) const;
  Rat degree_on_curve_basis(int b, const CurveVec& beta) const;
  // degree of -K = 3H - sum E_i on beta
  int anticanonical_degree(const CurveVec& beta) const;
  int anticanonical_degree(const CurveClass& beta) const;

  int expected_dim(int g, const CurveClass& beta, int n) const;
  int expected_dim(int g, const CurveVec& beta, int n) const;

  bool is_effective(const CurveClass& beta) const;

  // Classify a lattice vector as zero / exceptional / effective mixed.
  // Returns nullopt if the vector is none of these (invariants vanish).
  std::optional<CurveClass> classify(const CurveVec& v) const;
  CurveVec to_vec(const CurveClass& beta) const;

  // integral of c2(X_r) = Euler characteristic
  int chi() const { return 3 + r_; }
  CohomologyClass anticanonical() const;

 private:
  int r_;
  std::vector<DiagonalTerm> diag_;
};

}  // namespace gw
