#include "gw/relation.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "gw/sha256.hpp"

namespace gw {

void RelationElement::add_term(const DecoratedGraph& graph, const Rat& coeff) {
  if (coeff == 0) return;
  auto key = canonical_key(graph);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, Term{graph, coeff});
  } else {
    it->second.coeff += coeff;
    if (it->second.coeff == 0) terms_.erase(it);
  }
}

void RelationElement::add(const RelationElement& other, const Rat& scale) {
  for (const auto& [k, t] : other.terms_) add_term(t.graph, t.coeff * scale);
}

std::vector<std::string> RelationElement::validate() const {
  std::vector<std::string> bad;
  for (const auto& [key, t] : terms_) {
    auto v = t.graph.validate(g_, n_);
    bad.insert(bad.end(), v.begin(), v.end());
    if (t.graph.total_codim() != codim_) bad.push_back("codimension mismatch");
  }
  return bad;
}

RelationElement RelationElement::pullback_forgetful(int times) const {
  RelationElement cur = *this;
  for (int t = 0; t < times; ++t) {
    RelationElement next(g_, cur.n() + 1, codim_);
    int new_mark = cur.n() + 1;
    for (const auto& [key, term] : cur.terms()) {
      const DecoratedGraph& G = term.graph;
      for (int v = 0; v < G.num_vertices(); ++v) {
        // item iii: add the new leg at v
        DecoratedGraph H = G;
        H.leg_vertex.push_back(v);
        H.leg_psi.push_back(0);
        next.add_term(H, term.coeff);

        // item ii corrections, one per decorated slot at v
        for (size_t li = 0; li < G.leg_vertex.size(); ++li) {
          if (G.leg_vertex[li] != v || G.leg_psi[li] == 0) continue;
          DecoratedGraph C = G;
          int b = C.num_vertices();
          C.genus.push_back(0);
          if (!C.anon.empty()) C.anon.push_back(0);
          int k = C.leg_psi[li];
          C.leg_vertex[li] = b;
          C.leg_psi[li] = 0;
          C.leg_vertex.push_back(b);  // the new marking
          C.leg_psi.push_back(0);
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
            if (!C.anon.empty()) C.anon.push_back(0);
            int k = C.edges[ei].psi[side];
            // old edge migrates to the bubble
            C.edges[ei].v[side] = b;
            C.edges[ei].psi[side] = 0;
            C.leg_vertex.push_back(b);
            C.leg_psi.push_back(0);
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
    (void)new_mark;
    cur = std::move(next);
  }
  return cur;
}

RelationElement RelationElement::multiply_leg_psi(int marking,
                                                  const Rat& scale) const {
  RelationElement out(g_, n_, codim_ + 1);
  for (const auto& [key, term] : terms_) {
    DecoratedGraph H = term.graph;
    int v = H.leg_vertex.at(size_t(marking) - 1);
    H.leg_psi[size_t(marking) - 1] += 1;
    int dim = 3 * H.genus[size_t(v)] - 3 + H.valence(v);
    if (H.decoration_degree(v) > dim) continue;  // class vanishes
    out.add_term(H, term.coeff * scale);
  }
  return out;
}

RelationElement RelationElement::relabel_legs(
    const std::vector<int>& new_marking) const {
  RelationElement out(g_, n_, codim_);
  for (const auto& [key, term] : terms_)
    out.add_term(term.graph.relabel_legs(new_marking), term.coeff);
  return out;
}

std::string RelationElement::serialize(const std::string& id) const {
  std::ostringstream os;
  os << "relation id=" << id << " g=" << g_ << " n=" << n_
     << " codim=" << codim_ << "\n";
  for (const auto& [key, term] : terms_) {
    os << "term " << term.coeff.str() << "\n";
    const DecoratedGraph& G = term.graph;
    for (int v = 0; v < G.num_vertices(); ++v) {
      os << "  vertex v" << v << " genus=" << G.genus[size_t(v)] << " legs=";
      bool first = true;
      for (size_t li = 0; li < G.leg_vertex.size(); ++li) {
        if (G.leg_vertex[li] != v) continue;
        if (!first) os << ",";
        os << (li + 1);
        first = false;
      }
      os << "\n";
    }
    std::vector<int> hid(size_t(G.num_vertices()), 0);
    for (size_t ei = 0; ei < G.edges.size(); ++ei) {
      const auto& e = G.edges[ei];
      int h0 = hid[size_t(e.v[0])]++;
      int h1 = hid[size_t(e.v[1])]++;
      os << "  edge v" << e.v[0] << ".h" << h0 << " v" << e.v[1] << ".h" << h1
         << "\n";
      if (e.psi[0] > 0)
        os << "  psi v" << e.v[0] << ".h" << h0 << "=" << e.psi[0] << "\n";
      if (e.psi[1] > 0)
        os << "  psi v" << e.v[1] << ".h" << h1 << "=" << e.psi[1] << "\n";
    }
    for (size_t li = 0; li < G.leg_psi.size(); ++li)
      if (G.leg_psi[li] > 0)
        os << "  psi leg" << (li + 1) << "=" << G.leg_psi[li] << "\n";
  }
  return os.str();
}

namespace {

struct Tok {
  std::string key, value;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

struct TermBuilder {
  Rat coeff;
  std::map<std::string, int> vid;  // textual vertex id -> index
  DecoratedGraph graph;
  std::vector<std::pair<int, int>> stars;  // (vertex, psi)
  // local half-edge name -> (edge index, side)
  std::map<std::string, std::pair<int, int>> half;
  int start_line = 0;
};

void finalize_term(RelationElement& rel, TermBuilder& tb, int g, int n,
                   int codim, int line) {
  // resolve leg table to size n with holes for stars
  if (tb.graph.leg_vertex.size() != size_t(n)) fail(line, "bad leg table");
  std::vector<int> holes;
  for (int m = 1; m <= n; ++m)
    if (tb.graph.leg_vertex[size_t(m) - 1] == -1) holes.push_back(m);
  if (holes.size() != tb.stars.size())
    fail(tb.start_line, "unlabeled legs do not match unassigned markings");

  std::vector<WeightedGraph> expanded;
  if (tb.stars.empty()) {
    expanded.push_back({tb.graph, Rat(1)});
  } else {
    expanded = expand_unlabeled(tb.graph, tb.stars, holes);
  }
  for (const auto& wg : expanded) {
    auto bad = wg.graph.validate(g, n);
    if (!bad.empty()) {
      for (const auto& b : bad)
        if (b == "unstable vertex") fail(tb.start_line, "unstable graph");
      fail(tb.start_line, bad.front());
    }
    if (wg.graph.total_codim() != codim)
      fail(tb.start_line, "codimension mismatch");
    rel.add_term(wg.graph, tb.coeff * wg.weight);
  }
}

}  // namespace

RelationElement parse_relation(const std::string& text, std::string* id_out) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  int g = 0, n = 0, codim = 0;
  std::string id;
  RelationElement rel;
  std::unique_ptr<TermBuilder> tb;

  auto flush = [&](int at_line) {
    if (tb) {
      finalize_term(rel, *tb, g, n, codim, at_line);
      tb.reset();
    }
  };

  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto words = split_ws(line);
    if (words.empty()) continue;
    const std::string& w0 = words[0];

    if (w0 == "relation") {
      if (have_header) fail(lineno, "duplicate header");
      for (size_t i = 1; i < words.size(); ++i) {
        auto eq = words[i].find('=');
        if (eq == std::string::npos) fail(lineno, "bad header field");
        std::string k = words[i].substr(0, eq), v = words[i].substr(eq + 1);
        if (k == "id") id = v;
        else if (k == "g") g = std::stoi(v);
        else if (k == "n") n = std::stoi(v);
        else if (k == "codim") codim = std::stoi(v);
        else fail(lineno, "unknown header field " + k);
      }
      if (n < 0 || g < 0 || codim < 0) fail(lineno, "bad header");
      rel = RelationElement(g, n, codim);
      have_header = true;
    } else if (w0 == "term") {
      if (!have_header) fail(lineno, "term before header");
      flush(lineno);
      if (words.size() != 2) fail(lineno, "term needs a coefficient");
      auto q = parse_rational(words[1]);
      if (!q) fail(lineno, "bad rational " + words[1]);
      tb = std::make_unique<TermBuilder>();
      tb->coeff = *q;
      tb->start_line = lineno;
      tb->graph.leg_vertex.assign(size_t(n), -1);
      tb->graph.leg_psi.assign(size_t(n), 0);
    } else if (w0 == "vertex") {
      if (!tb) fail(lineno, "vertex outside term");
      if (words.size() < 3) fail(lineno, "vertex needs genus and legs");
      std::string name = words[1];
      if (tb->vid.count(name)) fail(lineno, "duplicate vertex " + name);
      int genus = -1;
      std::string legs;
      bool saw_legs = false;
      for (size_t i = 2; i < words.size(); ++i) {
        auto eq = words[i].find('=');
        if (eq == std::string::npos) fail(lineno, "bad vertex field");
        std::string k = words[i].substr(0, eq), v = words[i].substr(eq + 1);
        if (k == "genus") genus = std::stoi(v);
        else if (k == "legs") { legs = v; saw_legs = true; }
        else if (k == "kappa") fail(lineno, "kappa unsupported");
        else fail(lineno, "unknown vertex field " + k);
      }
      if (genus < 0 || !saw_legs) fail(lineno, "vertex needs genus and legs");
      int v = tb->graph.num_vertices();
      tb->vid[name] = v;
      tb->graph.genus.push_back(genus);
      // legs value: "", "1,2", "[*,2]", ...
      std::string body = legs;
      if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') fail(lineno, "unterminated leg list");
        body = body.substr(1, body.size() - 2);
      }
      std::stringstream ls(body);
      std::string item;
      while (std::getline(ls, item, ',')) {
        if (item.empty()) continue;
        if (item == "*") {
          tb->stars.push_back({v, 0});
        } else {
          int m = std::stoi(item);
          if (m < 1 || m > n) fail(lineno, "marking out of range");
          if (tb->graph.leg_vertex[size_t(m) - 1] != -1)
            fail(lineno, "marking used twice");
          tb->graph.leg_vertex[size_t(m) - 1] = v;
        }
      }
    } else if (w0 == "edge") {
      if (!tb) fail(lineno, "edge outside term");
      if (words.size() != 3) fail(lineno, "edge needs two half-edges");
      DecoratedGraph::Edge e;
      for (int s = 0; s < 2; ++s) {
        const std::string& he = words[size_t(s) + 1];
        auto dot = he.find('.');
        if (dot == std::string::npos) fail(lineno, "bad half-edge " + he);
        std::string vname = he.substr(0, dot);
        auto it = tb->vid.find(vname);
        if (it == tb->vid.end()) fail(lineno, "unknown vertex " + vname);
        e.v[s] = it->second;
        if (tb->half.count(he)) fail(lineno, "half-edge reused: " + he);
        tb->half[he] = {int(tb->graph.edges.size()), s};
      }
      tb->graph.edges.push_back(e);
    } else if (w0 == "psi") {
      if (!tb) fail(lineno, "psi outside term");
      if (words.size() != 2) fail(lineno, "bad psi line");
      auto eq = words[1].find('=');
      if (eq == std::string::npos) fail(lineno, "bad psi line");
      std::string slot = words[1].substr(0, eq);
      int k = std::stoi(words[1].substr(eq + 1));
      if (k < 0) fail(lineno, "negative psi exponent");
      if (slot.rfind("leg", 0) == 0) {
        int m = std::stoi(slot.substr(3));
        if (m < 1 || m > n) fail(lineno, "psi marking out of range");
        tb->graph.leg_psi[size_t(m) - 1] = k;
      } else {
        auto it = tb->half.find(slot);
        if (it == tb->half.end()) fail(lineno, "unknown half-edge " + slot);
        tb->graph.edges[size_t(it->second.first)].psi[it->second.second] = k;
      }
    } else if (w0 == "kappa") {
      fail(lineno, "kappa unsupported");
    } else if (w0.rfind("sha256=", 0) == 0) {
      // checksum handled by the file loader; ignore here
      continue;
    } else {
      fail(lineno, "unknown directive " + w0);
    }
  }
  if (!have_header) fail(lineno, "missing header");
  flush(lineno);
  if (id_out) *id_out = id;
  return rel;
}

RelationElement load_relation_file(const std::string& path,
                                   std::string* id_out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::string text = buf.str();

  // the final nonempty line must be the checksum
  auto pos = text.rfind("sha256=");
  if (pos == std::string::npos)
    throw std::runtime_error(path + ": missing sha256 line");
  std::string body = text.substr(0, pos);
  std::string tail = text.substr(pos + 7);
  while (!tail.empty() && (tail.back() == '\n' || tail.back() == '\r' ||
                           tail.back() == ' '))
    tail.pop_back();
  if (sha256_hex(body) != tail)
    throw std::runtime_error(path + ": checksum mismatch");
  return parse_relation(body, id_out);
}

RelationElement wdvv_relation() {
  RelationElement rel(0, 4, 1);
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
  rel.add_term(make(1, 2, 3, 4), Rat(1));
  rel.add_term(make(1, 3, 2, 4), Rat(-1));
  return rel;
}

std::map<std::string, RelationAsset> load_assets(const std::string& dir,
                                                 bool optional) {
  std::map<std::string, RelationAsset> out;
  out["wdvv_0_4"] = RelationAsset{"wdvv_0_4", wdvv_relation()};
  for (const char* name : {"getzler_1_4", "bp_2_3", "l_2_4"}) {
    std::string path = dir + "/" + name + ".rel";
    std::ifstream probe(path);
    if (!probe) {
      if (optional) continue;
      throw std::runtime_error("missing relation asset " + path);
    }
    probe.close();
    std::string id;
    RelationElement rel = load_relation_file(path, &id);
    if (id != name)
      throw std::runtime_error(path + ": id mismatch (" + id + ")");
    auto bad = rel.validate();
    if (!bad.empty())
      throw std::runtime_error(path + ": invalid relation: " + bad.front());
    out[name] = RelationAsset{name, std::move(rel)};
  }
  return out;
}

std::string assets_checksum(
    const std::map<std::string, RelationAsset>& assets) {
  std::string all;
  for (const auto& [id, a] : assets) all += a.payload.serialize(id);
  return sha256_hex(all);
}

}  // namespace gw
