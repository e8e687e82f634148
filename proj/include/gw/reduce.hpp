#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gw/formal.hpp"
#include "gw/surface.hpp"

namespace gw {

// Canonical label of an irreducible invariant of X_r with d >= 1:
//   N: <pt^k>_{g,beta}          (g = 0,1,2)
//   H: <tau_1(H) pt^k>_{2,beta}
//   P: <tau_1(pt) pt^k>_{2,beta}
//   K: <tau_1(E_1) pt^k>_{2,beta}, alpha[0] is E_1's multiplicity
struct InvariantKey {
  char type = 'N';
  int g = 0;
  int d = 0;
  std::vector<int> alpha;

  static InvariantKey make(char type, int g, int d, std::vector<int> alpha);

  int alpha_sum() const;
  int points() const;  // number of tau_0(pt) insertions
  bool valid() const;

  bool operator<(const InvariantKey& o) const {
    if (type != o.type) return type < o.type;
    if (g != o.g) return g < o.g;
    if (d != o.d) return d < o.d;
    return alpha < o.alpha;
  }
  bool operator==(const InvariantKey& o) const {
    return type == o.type && g == o.g && d == o.d && alpha == o.alpha;
  }
  std::string str() const;
};

using KeyMonomial = std::vector<InvariantKey>;

struct KeyPolynomial {
  std::map<KeyMonomial, Rat> terms;

  void add(KeyMonomial m, const Rat& c) {
    if (c == 0) return;
    std::sort(m.begin(), m.end());
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(std::move(m), c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
  void add(const KeyPolynomial& p, const Rat& scale = Rat(1)) {
    for (const auto& [m, c] : p.terms) add(m, c * scale);
  }
  static KeyPolynomial constant(const Rat& c) {
    KeyPolynomial p;
    p.add(KeyMonomial{}, c);
    return p;
  }
  bool empty() const { return terms.empty(); }
};

KeyPolynomial operator*(const KeyPolynomial& a, const KeyPolynomial& b);

struct NonTaxonomyError : std::runtime_error {
  explicit NonTaxonomyError(const std::string& what)
      : std::runtime_error(what) {}
};

// Normal forms: string/divisor/dilaton equations in exact classical form,
// degree-0 and exceptional closed evaluations, genus <= 1 descendant
// elimination, and the map onto the N/H/P/K taxonomy.
class Reducer {
 public:
  explicit Reducer(const Surface& s) : s_(s) {}

  const Surface& surface() const { return s_; }

  // Full reduction.  Throws NonTaxonomyError for genus-2 leftovers outside
  // the taxonomy (descendant order >= 2, several descendants).
  const KeyPolynomial& reduce(const FormalInvariant& inv);
  KeyPolynomial reduce(const FormalPolynomial& poly);

  // Closed evaluations (total functions).
  Rat eval_degree_zero(int g, std::vector<Insertion> ins);
  Rat eval_exceptional(int g, int idx, int mult, std::vector<Insertion> ins);

  // Single-step equations, exposed for the property suites.  Each expects
  // the relevant insertion present; beta = 0 special cases come back as
  // constants (empty monomial).
  FormalPolynomial apply_string(const FormalInvariant& inv);
  FormalPolynomial apply_divisor(const FormalInvariant& inv, size_t slot);
  FormalPolynomial apply_dilaton(const FormalInvariant& inv);

 private:
  KeyPolynomial reduce_uncached(const FormalInvariant& inv);
  KeyPolynomial reduce_mixed(const FormalInvariant& inv);
  KeyPolynomial trr_genus0(const FormalInvariant& inv, size_t slot);
  KeyPolynomial trr_genus1(const FormalInvariant& inv, size_t slot);
  KeyPolynomial divisor_lift(const FormalInvariant& inv, size_t slot);

  const Surface& s_;
  std::map<FormalInvariant, KeyPolynomial> cache_;
};

}  // namespace gw
