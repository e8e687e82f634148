#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gw/rational.hpp"

namespace gw {

// A decorated stable graph: vertices with genus, numbered legs (markings
// 1..n), edges as pairs of half-edges, and psi exponents on half-edges and
// legs.  `anon[v]` counts unnumbered point-legs a vertex carries; these are
// interchangeable and only used internally by the splitting engine (they
// carry no psi).
struct DecoratedGraph {
  struct Edge {
    int v[2];
    int psi[2] = {0, 0};
  };

  std::vector<int> genus;
  std::vector<int> leg_vertex;  // marking i (1-based) sits at leg_vertex[i-1]
  std::vector<int> leg_psi;     // parallel to leg_vertex
  std::vector<Edge> edges;
  std::vector<int> anon;  // optional; empty means all zero

  int num_vertices() const { return int(genus.size()); }
  int num_legs() const { return int(leg_vertex.size()); }
  int anon_at(int v) const {
    return anon.empty() ? 0 : anon[size_t(v)];
  }
  int num_anon() const;
  // legs + anon legs + half-edges at v
  int valence(int v) const;
  int half_edges_at(int v) const;
  bool is_connected() const;
  int h1() const;  // #edges - #vertices + 1, assuming connected
  int total_genus() const;
  int decoration_degree(int v) const;  // sum of psi exponents at v
  int total_codim() const;             // #edges + all psi exponents

  bool has_self_edge() const;

  // Empty list means the graph is a valid (g, n) decorated stable graph.
  std::vector<std::string> validate(int expected_g, int expected_n) const;

  DecoratedGraph relabel_legs(const std::vector<int>& new_marking) const;
};

using CanonicalKey = std::string;

// Order-independent serialization; equal iff the graphs are isomorphic
// preserving leg markings, genera, anon counts and psi decorations.
CanonicalKey canonical_key(const DecoratedGraph& g);

// Order of the automorphism group fixing legs pointwise and preserving
// genera, anon counts and psi decorations.
std::int64_t automorphism_count(const DecoratedGraph& g);

// Expansion of the unlabeled-leg drawing convention: assigns `markings` to
// the star slots (given as (vertex, psi) pairs) in all k! ways, each with
// weight 1/k!, merging isomorphic results.
struct WeightedGraph {
  DecoratedGraph graph;
  Rat weight;
};
std::vector<WeightedGraph> expand_unlabeled(
    const DecoratedGraph& base, const std::vector<std::pair<int, int>>& stars,
    const std::vector<int>& markings);

}  // namespace gw
