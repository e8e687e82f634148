#include "gw/graph.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gw {

int DecoratedGraph::num_anon() const {
  int s = 0;
  for (int a : anon) s += a;
  return s;
}

int DecoratedGraph::half_edges_at(int v) const {
  int s = 0;
  for (const auto& e : edges) {
    if (e.v[0] == v) ++s;
    if (e.v[1] == v) ++s;
  }
  return s;
}

int DecoratedGraph::valence(int v) const {
  int s = half_edges_at(v) + anon_at(v);
  for (int lv : leg_vertex)
    if (lv == v) ++s;
  return s;
}

bool DecoratedGraph::is_connected() const {
  int n = num_vertices();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& e : edges) {
      for (int s = 0; s < 2; ++s) {
        if (e.v[s] == v && !seen[size_t(e.v[1 - s])]) {
          seen[size_t(e.v[1 - s])] = 1;
          stack.push_back(e.v[1 - s]);
        }
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

int DecoratedGraph::h1() const { return int(edges.size()) - num_vertices() + 1; }

int DecoratedGraph::total_genus() const {
  int s = h1();
  for (int g : genus) s += g;
  return s;
}

int DecoratedGraph::decoration_degree(int v) const {
  int s = 0;
  for (size_t i = 0; i < leg_vertex.size(); ++i)
    if (leg_vertex[i] == v) s += leg_psi[i];
  for (const auto& e : edges)
    for (int sd = 0; sd < 2; ++sd)
      if (e.v[sd] == v) s += e.psi[sd];
  return s;
}

int DecoratedGraph::total_codim() const {
  int s = int(edges.size());
  for (int p : leg_psi) s += p;
  for (const auto& e : edges) s += e.psi[0] + e.psi[1];
  return s;
}

bool DecoratedGraph::has_self_edge() const {
  return std::any_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.v[0] == e.v[1]; });
}

std::vector<std::string> DecoratedGraph::validate(int expected_g,
                                                  int expected_n) const {
  std::vector<std::string> bad;
  int n = num_vertices();
  if (n == 0) {
    bad.push_back("empty graph");
    return bad;
  }
  for (int v = 0; v < n; ++v)
    if (genus[size_t(v)] < 0) bad.push_back("negative genus");
  for (int lv : leg_vertex)
    if (lv < 0 || lv >= n) bad.push_back("leg attached to missing vertex");
  for (const auto& e : edges)
    for (int s = 0; s < 2; ++s)
      if (e.v[s] < 0 || e.v[s] >= n) bad.push_back("edge endpoint missing");
  for (int p : leg_psi)
    if (p < 0) bad.push_back("negative psi exponent");
  for (const auto& e : edges)
    if (e.psi[0] < 0 || e.psi[1] < 0) bad.push_back("negative psi exponent");
  if (!bad.empty()) return bad;

  if (!is_connected()) bad.push_back("disconnected graph");
  if (num_legs() != expected_n) bad.push_back("wrong number of legs");
  if (is_connected() && total_genus() != expected_g)
    bad.push_back("genus mismatch");
  for (int v = 0; v < n; ++v) {
    if (2 * genus[size_t(v)] - 2 + valence(v) <= 0)
      bad.push_back("unstable vertex");
    int dim = 3 * genus[size_t(v)] - 3 + valence(v);
    if (decoration_degree(v) > dim)
      bad.push_back("decoration exceeds vertex dimension");
  }
  return bad;
}

DecoratedGraph DecoratedGraph::relabel_legs(
    const std::vector<int>& new_marking) const {
  DecoratedGraph out = *this;
  for (size_t i = 0; i < leg_vertex.size(); ++i) {
    int m = new_marking[i];
    out.leg_vertex[size_t(m - 1)] = leg_vertex[i];
    out.leg_psi[size_t(m - 1)] = leg_psi[i];
  }
  return out;
}

namespace {

// Per-vertex data independent of vertex numbering; vertices carrying
// distinct named legs can never map to each other.
struct VertexColor {
  int genus;
  int anon;
  std::vector<std::pair<int, int>> legs;  // (marking, psi), sorted

  bool operator<(const VertexColor& o) const {
    if (genus != o.genus) return genus < o.genus;
    if (anon != o.anon) return anon < o.anon;
    return legs < o.legs;
  }
  bool operator==(const VertexColor& o) const {
    return genus == o.genus && anon == o.anon && legs == o.legs;
  }
};

std::vector<VertexColor> vertex_colors(const DecoratedGraph& g) {
  std::vector<VertexColor> cols(size_t(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v) {
    cols[size_t(v)].genus = g.genus[size_t(v)];
    cols[size_t(v)].anon = g.anon_at(v);
  }
  for (size_t i = 0; i < g.leg_vertex.size(); ++i)
    cols[size_t(g.leg_vertex[i])].legs.push_back(
        {int(i) + 1, g.leg_psi[i]});
  for (auto& c : cols) std::sort(c.legs.begin(), c.legs.end());
  return cols;
}

std::string encode(const DecoratedGraph& g, const std::vector<int>& perm) {
  // perm[v] = new index of vertex v
  std::ostringstream os;
  int n = g.num_vertices();
  std::vector<int> inv(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) inv[size_t(perm[size_t(v)])] = v;
  os << "V";
  for (int p = 0; p < n; ++p) {
    int v = inv[size_t(p)];
    os << "(" << g.genus[size_t(v)] << "," << g.anon_at(v) << ")";
  }
  os << "L";
  for (size_t i = 0; i < g.leg_vertex.size(); ++i)
    os << perm[size_t(g.leg_vertex[i])] << ":" << g.leg_psi[i] << ",";
  std::vector<std::array<int, 4>> es;
  for (const auto& e : g.edges) {
    int a = perm[size_t(e.v[0])], b = perm[size_t(e.v[1])];
    int pa = e.psi[0], pb = e.psi[1];
    if (a > b || (a == b && pa > pb)) {
      std::swap(a, b);
      std::swap(pa, pb);
    }
    es.push_back({a, b, pa, pb});
  }
  std::sort(es.begin(), es.end());
  os << "E";
  for (const auto& e : es)
    os << e[0] << "-" << e[1] << ":" << e[2] << ":" << e[3] << ";";
  return os.str();
}

// Enumerate permutations respecting color classes, invoking f with each.
template <typename F>
void for_each_color_perm(const std::vector<VertexColor>& cols, F&& f) {
  int n = int(cols.size());
  // group vertex indices by color
  std::map<VertexColor, std::vector<int>> classes;
  for (int v = 0; v < n; ++v) classes[cols[size_t(v)]].push_back(v);

  std::vector<std::vector<int>> groups;
  for (auto& [c, vs] : classes) groups.push_back(vs);

  // assign new indices: color classes ordered by color; within a class all
  // orderings are tried
  std::vector<int> base(static_cast<size_t>(n));
  {
    int next = 0;
    for (const auto& gvs : groups)
      for (int v : gvs) base[size_t(v)] = next++;
  }
  // permute within groups
  std::vector<std::vector<int>> orders;
  for (auto& gvs : groups) {
    std::sort(gvs.begin(), gvs.end());
    orders.push_back(gvs);
  }
  std::vector<int> perm(static_cast<size_t>(n));
  // iterate over product of permutations of each group
  std::function<void(size_t)> rec = [&](size_t gi) {
    if (gi == orders.size()) {
      f(perm);
      return;
    }
    std::vector<int> idx = orders[gi];
    std::sort(idx.begin(), idx.end());
    do {
      // base slots of this class are contiguous starting at min slot
      int mn = base[size_t(orders[gi][0])];
      for (int v : orders[gi]) mn = std::min(mn, base[size_t(v)]);
      for (size_t k = 0; k < idx.size(); ++k)
        perm[size_t(idx[k])] = mn + int(k);
      rec(gi + 1);
    } while (std::next_permutation(idx.begin(), idx.end()));
  };
  rec(0);
}

}  // namespace

CanonicalKey canonical_key(const DecoratedGraph& g) {
  auto cols = vertex_colors(g);
  std::string best;
  for_each_color_perm(cols, [&](const std::vector<int>& perm) {
    std::string e = encode(g, perm);
    if (best.empty() || e < best) best = e;
  });
  return best;
}

std::int64_t automorphism_count(const DecoratedGraph& g) {
  auto cols = vertex_colors(g);
  int n = g.num_vertices();
  std::int64_t total = 0;

  // Collect per-pair edge multisets keyed by ordered (min,max) endpoints.
  auto pair_key = [&](int a, int b) { return a <= b ? std::make_pair(a, b)
                                                    : std::make_pair(b, a); };
  std::map<std::pair<int, int>, std::multiset<std::pair<int, int>>> bundles;
  for (const auto& e : g.edges) {
    int a = e.v[0], b = e.v[1];
    int pa = e.psi[0], pb = e.psi[1];
    if (a > b) {
      std::swap(a, b);
      std::swap(pa, pb);
    }
    if (a == b && pa > pb) std::swap(pa, pb);
    bundles[{a, b}].insert({pa, pb});
  }

  std::vector<int> id(static_cast<size_t>(n));
  std::iota(id.begin(), id.end(), 0);

  // A vertex permutation sigma is admissible if colors match (named legs fix
  // their vertices automatically since each color then contains the legs).
  for_each_color_perm(cols, [&](const std::vector<int>& permNewIdx) {
    // convert "new index" form to a vertex->vertex map: sigma(v) = vertex w
    // occupying v's slot under identity ordering.  Build sigma directly.
    std::vector<int> sigma(static_cast<size_t>(n), -1);
    // permNewIdx[v] = slot; identity assigns slots via the same base indexing
    // used in for_each_color_perm, so match slots of identity.
    std::vector<int> idslot(static_cast<size_t>(n));
    {
      std::map<VertexColor, std::vector<int>> classes;
      for (int v = 0; v < n; ++v) classes[cols[size_t(v)]].push_back(v);
      int next = 0;
      for (auto& [c, vs] : classes) {
        std::sort(vs.begin(), vs.end());
        for (int v : vs) idslot[size_t(v)] = next++;
      }
    }
    std::vector<int> slot_to_vertex(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) slot_to_vertex[size_t(idslot[size_t(v)])] = v;
    for (int v = 0; v < n; ++v)
      sigma[size_t(v)] = slot_to_vertex[size_t(permNewIdx[size_t(v)])];

    // check edge bundles map consistently and count half-edge matchings
    std::int64_t ways = 1;
    for (const auto& [pk, ms] : bundles) {
      auto [a, b] = pk;
      int sa = sigma[size_t(a)], sb = sigma[size_t(b)];
      auto tk = pair_key(sa, sb);
      auto it = bundles.find(tk);
      if (it == bundles.end()) {
        ways = 0;
        break;
      }
      bool flipped = (sa > sb);
      std::multiset<std::pair<int, int>> expect;
      if (a == b) {
        expect = ms;  // loops: unordered pairs already normalized
      } else if (!flipped) {
        expect = ms;
      } else {
        for (auto [pa, pb] : ms) expect.insert({pb, pa});
        if (tk.first == tk.second) {
          // non-loop mapping to loop is impossible
          ways = 0;
          break;
        }
      }
      if (it->second != expect) {
        ways = 0;
        break;
      }
    }
    if (ways == 0) return;

    // Count matchings only once per unordered orbit: to count |Aut| we count
    // pairs (sigma, half-edge matching).  Matchings factor over edge bundles
    // of the *source*; each bundle maps onto its target bundle.  When sigma
    // maps bundle P to bundle Q != P, the matchings between them are counted
    // when we process P (bijections P->Q); processing Q counts Q->its target.
    for (const auto& [pk, ms] : bundles) {
      auto [a, b] = pk;
      bool loop = (a == b);
      std::map<std::pair<int, int>, int> mult;
      for (auto& t : ms) mult[t]++;
      std::int64_t f = 1;
      for (auto& [t, m] : mult)
        for (int k = 2; k <= m; ++k) f *= k;
      if (loop) {
        for (auto& [t, m] : mult)
          if (t.first == t.second)
            for (int k = 0; k < m; ++k) f *= 2;
      }
      ways *= f;
    }
    total += ways;
  });
  return total;
}

std::vector<WeightedGraph> expand_unlabeled(
    const DecoratedGraph& base, const std::vector<std::pair<int, int>>& stars,
    const std::vector<int>& markings) {
  if (stars.size() != markings.size())
    throw std::invalid_argument("stars/markings size mismatch");
  // `base` holds the already-labeled legs, with leg_vertex = -1 holes at the
  // markings to be assigned.  Each of the k! assignments of `markings` to the
  // star slots enters with weight 1/k!.
  size_t k = stars.size();
  for (int m : markings) {
    if (m < 1 || m > base.num_legs() || base.leg_vertex[size_t(m) - 1] != -1)
      throw std::invalid_argument("markings must point at unassigned legs");
  }
  std::vector<size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Rat w(1);
  for (size_t i = 2; i <= k; ++i) w /= int(i);

  std::map<CanonicalKey, WeightedGraph> acc;
  do {
    DecoratedGraph g = base;
    for (size_t i = 0; i < k; ++i) {
      g.leg_vertex[size_t(markings[i]) - 1] = stars[perm[i]].first;
      g.leg_psi[size_t(markings[i]) - 1] = stars[perm[i]].second;
    }
    auto key = canonical_key(g);
    auto it = acc.find(key);
    if (it == acc.end())
      acc.emplace(key, WeightedGraph{g, w});
    else
      it->second.weight += w;
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<WeightedGraph> out;
  for (auto& [key, wg] : acc) out.push_back(std::move(wg));
  return out;
}

}  // namespace gw
