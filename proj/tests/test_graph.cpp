#include "doctest.h"
#include "gw/graph.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>

using namespace gw;

namespace {

DecoratedGraph single_vertex(int g, int nlegs) {
  DecoratedGraph G;
  G.genus = {g};
  G.leg_vertex.assign(size_t(nlegs), 0);
  G.leg_psi.assign(size_t(nlegs), 0);
  return G;
}

// Brute-force automorphism count: try all vertex permutations and all
// bijections of edges with side choices.
std::int64_t brute_aut(const DecoratedGraph& G) {
  int n = G.num_vertices();
  std::vector<int> sigma(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) sigma[size_t(i)] = i;
  std::int64_t count = 0;
  do {
    // legs must stay put, genus/anon preserved
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (G.genus[size_t(v)] != G.genus[size_t(sigma[size_t(v)])]) ok = false;
      if (G.anon_at(v) != G.anon_at(sigma[size_t(v)])) ok = false;
    }
    for (size_t l = 0; l < G.leg_vertex.size() && ok; ++l)
      if (sigma[size_t(G.leg_vertex[l])] != G.leg_vertex[l]) ok = false;
    if (!ok) continue;

    // match edges: try all bijections edge->edge with orientation
    int m = int(G.edges.size());
    std::vector<int> em(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) em[size_t(i)] = i;
    do {
      // for each source edge and target edge, try both orientations
      std::function<std::int64_t(int)> countOrient = [&](int i) -> std::int64_t {
        if (i == m) return 1;
        const auto& e = G.edges[size_t(i)];
        const auto& f = G.edges[size_t(em[size_t(i)])];
        std::int64_t ways = 0;
        for (int o = 0; o < 2; ++o) {
          int a = sigma[size_t(e.v[0])], b = sigma[size_t(e.v[1])];
          int pa = e.psi[0], pb = e.psi[1];
          if (o == 1) {
            std::swap(a, b);
            std::swap(pa, pb);
          }
          if (a == f.v[0] && b == f.v[1] && pa == f.psi[0] && pb == f.psi[1])
            ways += countOrient(i + 1);
        }
        return ways;
      };
      count += countOrient(0);
    } while (std::next_permutation(em.begin(), em.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return count;
}

}  // namespace

TEST_CASE("validate basics") {
  auto G = single_vertex(2, 4);
  CHECK(G.validate(2, 4).empty());

  DecoratedGraph bad = single_vertex(0, 2);
  auto v = bad.validate(0, 2);
  bool unstable = false;
  for (auto& s : v)
    if (s == "unstable vertex") unstable = true;
  CHECK(unstable);

  // two g=0 vertices joined by two edges: total genus 1
  DecoratedGraph loop;
  loop.genus = {0, 0};
  loop.leg_vertex = {0, 0, 1, 1};
  loop.leg_psi = {0, 0, 0, 0};
  DecoratedGraph::Edge e;
  e.v[0] = 0;
  e.v[1] = 1;
  loop.edges.push_back(e);
  loop.edges.push_back(e);
  CHECK(loop.validate(1, 4).empty());
  CHECK(loop.h1() == 1);
}

TEST_CASE("canonical key is relabeling invariant") {
  DecoratedGraph G;
  G.genus = {0, 3};
  G.leg_vertex = {0, 1, 0};
  G.leg_psi = {0, 0, 0};
  DecoratedGraph::Edge e;
  e.v[0] = 0;
  e.v[1] = 1;
  G.edges.push_back(e);
  G.edges.push_back(e);

  DecoratedGraph H;  // same graph, vertices swapped
  H.genus = {3, 0};
  H.leg_vertex = {1, 0, 1};
  H.leg_psi = {0, 0, 0};
  DecoratedGraph::Edge f;
  f.v[0] = 1;
  f.v[1] = 0;
  H.edges.push_back(f);
  f.v[0] = 0;
  f.v[1] = 1;  // opposite orientation on purpose
  H.edges.push_back(f);

  CHECK(canonical_key(G) == canonical_key(H));
}

TEST_CASE("WDVV leg splits get distinct keys") {
  auto make = [](int a, int b, int c, int d) {
    DecoratedGraph G;
    G.genus = {0, 0};
    G.leg_vertex.assign(4, 0);
    G.leg_vertex[size_t(a) - 1] = 0;
    G.leg_vertex[size_t(b) - 1] = 0;
    G.leg_vertex[size_t(c) - 1] = 1;
    G.leg_vertex[size_t(d) - 1] = 1;
    G.leg_psi.assign(4, 0);
    DecoratedGraph::Edge e;
    e.v[0] = 0;
    e.v[1] = 1;
    G.edges.push_back(e);
    return G;
  };
  CHECK(canonical_key(make(1, 2, 3, 4)) != canonical_key(make(1, 3, 2, 4)));
  CHECK(canonical_key(make(1, 2, 3, 4)) == canonical_key(make(2, 1, 4, 3)));
}

TEST_CASE("psi decorations distinguish keys") {
  auto G = single_vertex(1, 2);
  auto H = G;
  H.leg_psi[0] = 1;
  CHECK(canonical_key(G) != canonical_key(H));
}

TEST_CASE("automorphisms: examples") {
  CHECK(automorphism_count(single_vertex(2, 4)) == 1);

  // two vertices (g=0 with legs {1,3}; g=3 with leg {2}) joined by two edges
  DecoratedGraph G;
  G.genus = {0, 3};
  G.leg_vertex = {0, 1, 0};
  G.leg_psi = {0, 0, 0};
  DecoratedGraph::Edge e;
  e.v[0] = 0;
  e.v[1] = 1;
  G.edges.push_back(e);
  G.edges.push_back(e);
  CHECK(automorphism_count(G) == 2);
  CHECK(brute_aut(G) == 2);

  // psi on one half-edge breaks the swap
  auto H = G;
  H.edges[0].psi[0] = 1;
  CHECK(automorphism_count(H) == 1);
  CHECK(brute_aut(H) == 1);
}

TEST_CASE("automorphisms match brute force on a small census") {
  // exhaustive-ish census: all graphs with <= 3 vertices, <= 4 edges,
  // genus <= 2 per vertex, <= 2 legs, psi <= 1 on half-edges
  std::mt19937 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    int nv = 1 + int(rng() % 3);
    DecoratedGraph G;
    for (int v = 0; v < nv; ++v) G.genus.push_back(int(rng() % 3));
    int nlegs = int(rng() % 3);
    for (int l = 0; l < nlegs; ++l) {
      G.leg_vertex.push_back(int(rng() % size_t(nv)));
      G.leg_psi.push_back(0);
    }
    int ne = int(rng() % 5);
    for (int i = 0; i < ne; ++i) {
      DecoratedGraph::Edge e;
      e.v[0] = int(rng() % size_t(nv));
      e.v[1] = int(rng() % size_t(nv));
      if (e.v[0] == e.v[1]) continue;  // census: loop-free
      e.psi[0] = int(rng() % 2);
      e.psi[1] = 0;
      G.edges.push_back(e);
    }
    if (!G.is_connected()) continue;
    ++checked;
    CHECK(automorphism_count(G) == brute_aut(G));
    if (checked > 400) break;
  }
  CHECK(checked > 100);
}

TEST_CASE("canonical key invariance under random relabeling") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int nv = 1 + int(rng() % 5);
    DecoratedGraph G;
    for (int v = 0; v < nv; ++v) G.genus.push_back(int(rng() % 3));
    int nlegs = int(rng() % 4);
    for (int l = 0; l < nlegs; ++l) {
      G.leg_vertex.push_back(int(rng() % size_t(nv)));
      G.leg_psi.push_back(int(rng() % 2));
    }
    for (int i = 0, ne = int(rng() % 6); i < ne; ++i) {
      DecoratedGraph::Edge e;
      e.v[0] = int(rng() % size_t(nv));
      e.v[1] = int(rng() % size_t(nv));
      if (e.v[0] == e.v[1]) continue;
      e.psi[0] = int(rng() % 2);
      e.psi[1] = int(rng() % 2);
      G.edges.push_back(e);
    }
    if (!G.is_connected()) continue;

    // relabel vertices randomly
    std::vector<int> perm(static_cast<size_t>(nv));
    for (int i = 0; i < nv; ++i) perm[size_t(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    DecoratedGraph H;
    H.genus.assign(size_t(nv), 0);
    for (int v = 0; v < nv; ++v) H.genus[size_t(perm[size_t(v)])] = G.genus[size_t(v)];
    for (size_t l = 0; l < G.leg_vertex.size(); ++l) {
      H.leg_vertex.push_back(perm[size_t(G.leg_vertex[l])]);
      H.leg_psi.push_back(G.leg_psi[l]);
    }
    for (auto e : G.edges) {
      DecoratedGraph::Edge f;
      f.v[0] = perm[size_t(e.v[0])];
      f.v[1] = perm[size_t(e.v[1])];
      f.psi[0] = e.psi[0];
      f.psi[1] = e.psi[1];
      if (rng() % 2) {
        std::swap(f.v[0], f.v[1]);
        std::swap(f.psi[0], f.psi[1]);
      }
      H.edges.push_back(f);
    }
    std::shuffle(H.edges.begin(), H.edges.end(), rng);
    CHECK(canonical_key(G) == canonical_key(H));
  }
}

TEST_CASE("expand_unlabeled: paper example shape") {
  // genus-4 vertex with one star; genus-0 vertex with leg 1 and one star
  DecoratedGraph base;
  base.genus = {4, 0};
  base.leg_vertex = {1, -1, -1};  // marking 1 at the genus-0 vertex
  base.leg_psi = {0, 0, 0};
  DecoratedGraph::Edge e;
  e.v[0] = 0;
  e.v[1] = 1;
  base.edges.push_back(e);
  std::vector<std::pair<int, int>> stars = {{0, 0}, {1, 0}};
  auto out = expand_unlabeled(base, stars, {2, 3});
  REQUIRE(out.size() == 2);
  CHECK(out[0].weight == Rat(1, 2));
  CHECK(out[1].weight == Rat(1, 2));
}

TEST_CASE("expand_unlabeled: fully symmetric merges to weight 1") {
  DecoratedGraph base = single_vertex(2, 3);
  base.leg_vertex = {-1, -1, -1};
  std::vector<std::pair<int, int>> stars = {{0, 0}, {0, 0}, {0, 0}};
  auto out = expand_unlabeled(base, stars, {1, 2, 3});
  REQUIRE(out.size() == 1);
  CHECK(out[0].weight == 1);
}

TEST_CASE("expand_unlabeled: no stars is identity") {
  auto G = single_vertex(1, 2);
  auto out = expand_unlabeled(G, {}, {});
  REQUIRE(out.size() == 1);
  CHECK(out[0].weight == 1);
}
