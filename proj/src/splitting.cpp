#include "gw/splitting.hpp"

#include <algorithm>
#include <stdexcept>

namespace gw {

std::vector<std::vector<CurveClass>> distribute_degrees(
    const Surface& s, const DecoratedGraph& graph, const CurveClass& beta) {
  std::vector<DegreeWindow> windows;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    (void)v;
    windows.push_back(DegreeWindow{-(1 << 20), 1 << 20});
  }
  std::vector<std::vector<CurveClass>> out;
  enumerate_assignments(s, s.to_vec(beta), windows,
                        [&](const std::vector<CurveClass>& parts) {
                          out.push_back(parts);
                        });
  return out;
}

std::pair<Rat, int> contract_trivial_tail(const Surface& s, int cls_a,
                                          int cls_b) {
  return s.cup_basis(cls_a, cls_b);
}

RelationElement pullback_anonymous(const RelationElement& rel, int times) {
  RelationElement cur = rel;
  // ensure anon vectors exist
  {
    RelationElement withanon(rel.g(), rel.n(), rel.codim());
    for (const auto& [k, t] : rel.terms()) {
      DecoratedGraph G = t.graph;
      if (G.anon.empty()) G.anon.assign(size_t(G.num_vertices()), 0);
      withanon.add_term(G, t.coeff);
    }
    cur = std::move(withanon);
  }
  for (int t = 0; t < times; ++t) {
    RelationElement next(cur.g(), cur.n(), cur.codim());
    for (const auto& [key, term] : cur.terms()) {
      const DecoratedGraph& G = term.graph;
      for (int v = 0; v < G.num_vertices(); ++v) {
        DecoratedGraph H = G;
        H.anon[size_t(v)] += 1;
        next.add_term(H, term.coeff);

        for (size_t li = 0; li < G.leg_vertex.size(); ++li) {
          if (G.leg_vertex[li] != v || G.leg_psi[li] == 0) continue;
          DecoratedGraph C = G;
          int b = C.num_vertices();
          C.genus.push_back(0);
          C.anon.push_back(1);  // the new anonymous point
          int k = C.leg_psi[li];
          C.leg_vertex[li] = b;
          C.leg_psi[li] = 0;
          DecoratedGraph::Edge e;
          e.v[0] = v;
          e.v[1] = b;
          e.psi[0] = k - 1;
          e.psi[1] = 0;
          C.edges.push_back(e);
          next.add_term(C, -term.coeff);
        }
        for (size_t ei = 0; ei < G.edges.size(); ++ei) {
          for (int side = 0; side < 2; ++side) {
            if (G.edges[ei].v[side] != v || G.edges[ei].psi[side] == 0)
              continue;
            DecoratedGraph C = G;
            int b = C.num_vertices();
            C.genus.push_back(0);
            C.anon.push_back(1);
            int k = C.edges[ei].psi[side];
            C.edges[ei].v[side] = b;
            C.edges[ei].psi[side] = 0;
            DecoratedGraph::Edge e;
            e.v[0] = v;
            e.v[1] = b;
            e.psi[0] = k - 1;
            e.psi[1] = 0;
            C.edges.push_back(e);
            next.add_term(C, -term.coeff);
          }
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

FormalPolynomial Engine::convert_vertex(VertexState state) {
  std::sort(state.slots.begin(), state.slots.end());
  StateKey key{state.g, state.beta, state.slots};
  auto cached = conv_cache_.find(key);
  if (cached != conv_cache_.end()) return cached->second;
  FormalPolynomial result = [&]() -> FormalPolynomial {
  // find a pending slot
  size_t slot = state.slots.size();
  for (size_t i = 0; i < state.slots.size(); ++i) {
    if (state.slots[i].pending > 0) {
      slot = i;
      break;
    }
  }
  if (slot == state.slots.size()) {
    FormalInvariant inv;
    inv.g = state.g;
    inv.beta = state.beta;
    for (const auto& s : state.slots) inv.ins.push_back({s.tilde, s.cls});
    inv.normalize();
    // dimension pruning
    int deg = 0;
    for (const auto& i : inv.ins) deg += s_.complex_deg(i.cls) + i.psi;
    if (deg != s_.expected_dim(inv.g, inv.beta, int(inv.ins.size())))
      return {};
    if (!s_.classify(inv.beta)) return {};
    FormalPolynomial out;
    out.add({inv}, Rat(1));
    return out;
  }

  // tilde branch
  FormalPolynomial out;
  {
    VertexState next = state;
    next.slots[slot].tilde += 1;
    next.slots[slot].pending -= 1;
    out.add(convert_vertex(std::move(next)));
  }
  // boundary correction: the slot point moves to a rational bubble of
  // nonzero degree; the remaining exponent transfers to the new node.
  const Slot sl = state.slots[slot];
  int base = s_.complex_deg(sl.cls) + sl.tilde;
  DegreeWindow w{std::max(1, base - 1), base + 1};
  for (auto& [b1, b2] : two_part_splits(s_, state.beta, w)) {
    if (b1.kind == CurveClass::Kind::zero) continue;
    for (const auto& dt : s_.diagonal_terms()) {
      FormalInvariant bubble;
      bubble.g = 0;
      bubble.beta = s_.to_vec(b1);
      bubble.ins = {{sl.tilde, sl.cls}, {0, dt.e}};
      bubble.normalize();
      int deg = 0;
      for (const auto& i : bubble.ins) deg += s_.complex_deg(i.cls) + i.psi;
      if (deg != s_.expected_dim(0, bubble.beta, 2)) continue;

      VertexState next = state;
      next.beta = s_.to_vec(b2);
      next.slots[slot] = Slot{dt.f, 0, sl.pending - 1};
      FormalPolynomial tail = convert_vertex(std::move(next));
      if (tail.empty()) continue;
      FormalPolynomial bub;
      bub.add({bubble}, Rat(1));
      out.add(bub * tail, -dt.weight);
    }
  }
  return out;
  }();
  conv_cache_.emplace(std::move(key), result);
  return result;
}

FormalPolynomial Engine::expand_graph(const DecoratedGraph& G,
                                      const Rat& coeff,
                                      const std::vector<int>& leg_cls,
                                      const CurveVec& beta) {
  FormalPolynomial out;
  int nv = G.num_vertices();

  // per-vertex fixed insertions and a conservative anticanonical window
  std::vector<std::vector<Slot>> fixed(static_cast<size_t>(nv));
  std::vector<int> nodes(static_cast<size_t>(nv), 0);
  std::vector<int> pend(static_cast<size_t>(nv), 0);
  for (size_t li = 0; li < G.leg_vertex.size(); ++li) {
    int v = G.leg_vertex[li];
    fixed[size_t(v)].push_back(Slot{leg_cls[li], 0, G.leg_psi[li]});
    pend[size_t(v)] += G.leg_psi[li];
  }
  for (int v = 0; v < nv; ++v)
    for (int a = 0; a < G.anon_at(v); ++a)
      fixed[size_t(v)].push_back(Slot{s_.pt_idx(), 0, 0});
  for (const auto& e : G.edges) {
    nodes[size_t(e.v[0])]++;
    nodes[size_t(e.v[1])]++;
    pend[size_t(e.v[0])] += e.psi[0];
    pend[size_t(e.v[1])] += e.psi[1];
  }

  std::vector<DegreeWindow> windows;
  for (int v = 0; v < nv; ++v) {
    int mindeg = 0;
    for (const auto& s : fixed[size_t(v)]) mindeg += s_.complex_deg(s.cls);
    int nv_total = int(fixed[size_t(v)].size()) + nodes[size_t(v)];
    int g_v = G.genus[size_t(v)];
    // antideg(beta_v) = insdeg + 1 - g - n, insdeg within
    // [mindeg - slack, mindeg + 2*nodes + pend + slack]
    int slack = 8 * pend[size_t(v)];
    windows.push_back(
        DegreeWindow{mindeg + 1 - g_v - nv_total - slack,
                     mindeg + 2 * nodes[size_t(v)] + pend[size_t(v)] + slack +
                         1 - g_v - nv_total});
  }

  Rat base = coeff / automorphism_count(G);

  enumerate_assignments(
      s_, beta, windows, [&](const std::vector<CurveClass>& parts) {
        // iterate over diagonal choices per edge
        size_t ne = G.edges.size();
        std::vector<size_t> choice(ne, 0);
        const auto& diag = s_.diagonal_terms();
        while (true) {
          Rat w = base;
          // build vertex states
          std::vector<VertexState> states(static_cast<size_t>(nv));
          for (int v = 0; v < nv; ++v) {
            states[size_t(v)].g = G.genus[size_t(v)];
            states[size_t(v)].beta = s_.to_vec(parts[size_t(v)]);
            states[size_t(v)].slots = fixed[size_t(v)];
          }
          for (size_t ei = 0; ei < ne; ++ei) {
            const auto& dt = diag[choice[ei]];
            const auto& e = G.edges[ei];
            w *= dt.weight;
            states[size_t(e.v[0])].slots.push_back(
                Slot{dt.e, 0, e.psi[0]});
            states[size_t(e.v[1])].slots.push_back(
                Slot{dt.f, 0, e.psi[1]});
          }
          if (w != 0) {
            FormalPolynomial prod;
            prod.add(FormalMonomial{}, Rat(1));
            bool dead = false;
            for (int v = 0; v < nv && !dead; ++v) {
              FormalPolynomial pv = convert_vertex(states[size_t(v)]);
              if (pv.empty()) {
                dead = true;
                break;
              }
              prod = prod * pv;
            }
            if (!dead) out.add(prod, w);
          }
          // advance
          size_t i = 0;
          while (i < ne && ++choice[i] == diag.size()) {
            choice[i] = 0;
            ++i;
          }
          if (i == ne) break;
          if (ne == 0) break;
        }
      });
  return out;
}

FormalPolynomial Engine::expand(const RelationElement& rel,
                                const std::vector<int>& insertions,
                                const CurveClass& beta) {
  if (int(insertions.size()) != rel.n())
    throw std::invalid_argument("expand: wrong number of insertions");
  if (!s_.is_effective(beta))
    throw std::invalid_argument("expand: beta not effective");
  CurveVec bv = s_.to_vec(beta);
  FormalPolynomial out;
  for (const auto& [key, term] : rel.terms()) {
    std::vector<int> leg_cls;
    for (int li = 0; li < term.graph.num_legs(); ++li)
      leg_cls.push_back(insertions[size_t(li)]);
    out.add(expand_graph(term.graph, term.coeff, leg_cls, bv));
  }
  return out;
}

KeyPolynomial Engine::expand_reduced(const RelationElement& rel,
                                     const std::vector<int>& insertions,
                                     int extra_pts, const CurveClass& beta) {
  RelationElement pulled =
      extra_pts > 0 ? pullback_anonymous(rel, extra_pts) : rel;
  CurveVec bv = s_.to_vec(beta);
  KeyPolynomial out;
  for (const auto& [key, term] : pulled.terms()) {
    std::vector<int> leg_cls;
    for (int li = 0; li < term.graph.num_legs(); ++li)
      leg_cls.push_back(insertions[size_t(li)]);
    FormalPolynomial fp = expand_graph(term.graph, term.coeff, leg_cls, bv);
    out.add(red_.reduce(fp));
  }
  return out;
}

}  // namespace gw
