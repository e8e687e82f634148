#pragma once

#include <map>
#include <vector>

#include "gw/distribute.hpp"
#include "gw/formal.hpp"
#include "gw/reduce.hpp"
#include "gw/relation.hpp"

namespace gw {

// Degree distribution over the vertices of a stable graph: every assignment
// sums to beta, each part effective or zero (exceptional multiples allowed).
std::vector<std::vector<CurveClass>> distribute_degrees(
    const Surface& s, const DecoratedGraph& graph, const CurveClass& beta);

// The degree-0 three-point rational tail contraction: the diagonal sum
//   sum_{e,f} <a, b, T_e>_{0,0} g^{ef} tau_k(T_f)(...)
// collapses to tau_k(a cup b).  Returns the scalar and the cupped class.
std::pair<Rat, int> contract_trivial_tail(const Surface& s, int cls_a,
                                          int cls_b);

// Evaluates <S; gamma_1,...,gamma_n>_beta as a polynomial in formal
// Gromov-Witten invariants (Splitting Lemma expansion with psi-class
// conversion and dimension pruning), and the reduced form used by the
// solver.
class Engine {
 public:
  Engine(const Surface& s, Reducer& red) : s_(s), red_(red) {}

  // Spec-level expansion with basis-class insertions at the legs.
  FormalPolynomial expand(const RelationElement& rel,
                          const std::vector<int>& insertions,
                          const CurveClass& beta);

  // Expansion with `extra_pts` additional pulled-back point insertions,
  // fully reduced onto the taxonomy.
  KeyPolynomial expand_reduced(const RelationElement& rel,
                               const std::vector<int>& insertions,
                               int extra_pts, const CurveClass& beta);

  const Surface& surface() const { return s_; }
  Reducer& reducer() { return red_; }

 private:
  struct Slot {
    int cls;
    int tilde;
    int pending;
    bool operator<(const Slot& o) const {
      if (cls != o.cls) return cls < o.cls;
      if (tilde != o.tilde) return tilde < o.tilde;
      return pending < o.pending;
    }
  };
  struct VertexState {
    int g;
    CurveVec beta;
    std::vector<Slot> slots;
  };

  FormalPolynomial convert_vertex(VertexState state);
  FormalPolynomial expand_graph(const DecoratedGraph& g, const Rat& coeff,
                                const std::vector<int>& leg_cls,
                                const CurveVec& beta);

  using StateKey = std::tuple<int, CurveVec, std::vector<Slot>>;
  const Surface& s_;
  Reducer& red_;
  std::map<StateKey, FormalPolynomial> conv_cache_;
};

// Adds `times` anonymous point legs by forgetful pullback, merging terms
// that differ only by which labeled point sits where.
RelationElement pullback_anonymous(const RelationElement& rel, int times);

}  // namespace gw
