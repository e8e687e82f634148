#pragma once

#include <map>
#include <string>
#include <vector>

#include "gw/graph.hpp"
#include "gw/rational.hpp"

namespace gw {

// Rational linear combination of decorated graphs of fixed (g, n, codim).
// Terms are keyed canonically; like terms merged, zero coefficients dropped.
class RelationElement {
 public:
  RelationElement() = default;
  RelationElement(int g, int n, int codim) : g_(g), n_(n), codim_(codim) {}

  int g() const { return g_; }
  int n() const { return n_; }
  int codim() const { return codim_; }

  void add_term(const DecoratedGraph& graph, const Rat& coeff);
  void add(const RelationElement& other, const Rat& scale = Rat(1));
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  struct Term {
    DecoratedGraph graph;
    Rat coeff;
  };
  const std::map<CanonicalKey, Term>& terms() const { return terms_; }

  std::vector<std::string> validate() const;

  // Forgetful-map pullback, adding `times` new legs (markings n+1, ...).
  RelationElement pullback_forgetful(int times) const;

  // Multiply by the psi class at a leg.  Terms whose decoration overflows the
  // vertex dimension vanish and are dropped.
  RelationElement multiply_leg_psi(int marking, const Rat& scale = Rat(1)) const;

  // Relabel legs: new_marking[i] is the new marking of old leg i+1.
  RelationElement relabel_legs(const std::vector<int>& new_marking) const;

  std::string serialize(const std::string& id) const;

 private:
  int g_ = 0, n_ = 0, codim_ = 0;
  std::map<CanonicalKey, Term> terms_;
};

struct ParseError {
  int line;
  std::string message;
};

// Parses the line-oriented relation format.  Throws std::runtime_error with
// "line N: message" on syntax or validation problems.
RelationElement parse_relation(const std::string& text, std::string* id_out = nullptr);

// Loads a relation file and verifies its trailing sha256 line.
RelationElement load_relation_file(const std::string& path, std::string* id_out = nullptr);

// Built-in WDVV relation: [{1,2}|{3,4}] - [{1,3}|{2,4}] in codim 1, g=0, n=4.
RelationElement wdvv_relation();

struct RelationAsset {
  std::string id;
  RelationElement payload;
};

// Loads wdvv_0_4 (built in) plus getzler_1_4, bp_2_3 and l_2_4 from `dir`.
// Missing files are reported by throwing, except via the `optional` flag in
// which case absent assets are skipped.
std::map<std::string, RelationAsset> load_assets(const std::string& dir,
                                                 bool optional = false);

// Combined checksum over the asset payloads, used to invalidate caches.
std::string assets_checksum(const std::map<std::string, RelationAsset>& assets);

}  // namespace gw
