#include "gw/solver.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gw {

std::optional<Rat> InvariantStore::get(const InvariantKey& k) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = vals_.find(k);
  if (it == vals_.end()) return std::nullopt;
  return it->second;
}

void InvariantStore::put(const InvariantKey& k, const Rat& v) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = vals_.emplace(k, v);
  if (!inserted && it->second != v)
    throw std::logic_error("store: conflicting values for " + k.str());
}

size_t InvariantStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return vals_.size();
}

std::map<InvariantKey, Rat> InvariantStore::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return vals_;
}

void InvariantStore::save(const std::string& path,
                          const std::string& checksum) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write cache " + path);
  f << "# gw-cache v1\n";
  f << "relations-sha256=" << checksum << "\n";
  for (const auto& [k, v] : vals_) {
    f << k.type << "\t" << k.g << "\t" << k.d << "\t";
    if (k.alpha.empty()) {
      f << "-";
    } else {
      for (size_t i = 0; i < k.alpha.size(); ++i) {
        if (i) f << ",";
        f << k.alpha[i];
      }
    }
    f << "\t" << v.str() << "\n";
  }
}

bool InvariantStore::load(const std::string& path,
                          const std::string& checksum) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return true;  // nothing to load
  std::string line;
  if (!std::getline(f, line) || line != "# gw-cache v1") return false;
  if (!std::getline(f, line) || line != "relations-sha256=" + checksum)
    return false;
  std::lock_guard<std::mutex> lock(mu_);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string type, g, d, alpha, val;
    if (!std::getline(is, type, '\t') || !std::getline(is, g, '\t') ||
        !std::getline(is, d, '\t') || !std::getline(is, alpha, '\t') ||
        !std::getline(is, val))
      return false;
    InvariantKey k;
    k.type = type.at(0);
    k.g = std::stoi(g);
    k.d = std::stoi(d);
    if (alpha != "-") {
      std::stringstream as(alpha);
      std::string item;
      while (std::getline(as, item, ',')) k.alpha.push_back(std::stoi(item));
    }
    auto q = parse_rational(val);
    if (!q) return false;
    vals_[k] = *q;
  }
  return true;
}

Solver::Solver(std::map<std::string, RelationAsset> assets, SolverOptions opt)
    : assets_(std::move(assets)), opt_(opt) {}

std::string Solver::assets_checksum() const {
  return gw::assets_checksum(assets_);
}

Solver::Ring& Solver::ring(int r) {
  auto it = rings_.find(r);
  if (it != rings_.end()) return it->second;
  Ring ring;
  ring.surface = std::make_unique<Surface>(r);
  ring.reducer = std::make_unique<Reducer>(*ring.surface);
  ring.engine = std::make_unique<Engine>(*ring.surface, *ring.reducer);
  return rings_.emplace(r, std::move(ring)).first->second;
}

InvariantKey Solver::apply_optimizations(const InvariantKey& key) const {
  InvariantKey k = InvariantKey::make(key.type, key.g, key.d, key.alpha);
  if (opt_.drop_trailing) {
    // trailing-1 entries drop for N/H/P (and the unpinned part of K);
    // unproven for g > 0 with more than 8 points unless opted in
    auto may_drop = [&](size_t len) {
      if (k.g == 0) return true;
      if (len <= 8) return true;
      return opt_.assume_conjectural;
    };
    size_t floor_len = k.type == 'K' ? 1 : 0;
    while (k.alpha.size() > floor_len && k.alpha.back() == 1 &&
           may_drop(k.alpha.size())) {
      InvariantKey t = k;
      t.alpha.pop_back();
      if (t.points() < 0) break;
      k = t;
    }
  }
  if (opt_.cremona && k.type == 'N') {
    // degree-lowering quadratic transformation on the three largest entries
    while (true) {
      std::vector<int> a = k.alpha;
      a.resize(std::max<size_t>(a.size(), 3), 0);
      int delta = k.d - a[0] - a[1] - a[2];
      if (delta >= 0) break;
      int nd = k.d + delta;
      if (nd < 1) break;
      a[0] += delta;
      a[1] += delta;
      a[2] += delta;
      bool ok = true;
      for (int x : a)
        if (x < 0 || x > nd) ok = false;
      if (!ok) break;
      k = InvariantKey::make('N', k.g, nd, a);
    }
  }
  return k;
}

namespace {

int letter_basis(const Surface& s, char c) {
  switch (c) {
    case 'H': return s.h_idx();
    case 'E': return s.e_idx(1);
    case 'p': return s.pt_idx();
    case '1': return s.unit_idx();
  }
  throw std::logic_error("bad insertion letter");
}

int letter_degree(char c) {
  switch (c) {
    case 'H': return 1;
    case 'E': return 1;
    case 'p': return 2;
    case '1': return 0;
  }
  return 0;
}

}  // namespace

std::vector<Strategy> Solver::strategies_for(const InvariantKey& key) const {
  std::vector<Strategy> out;
  const std::vector<int>& alpha = key.alpha;

  auto base_with_walk = [&](int value_needed, int shift) {
    // bases obtained by putting an entry with value >= value_needed first
    // and lowering it by `shift`; one candidate per distinct entry value
    std::vector<std::vector<int>> bases;
    std::set<int> seen;
    for (size_t i = 0; i < alpha.size(); ++i) {
      int v = alpha[i];
      if (v < value_needed || seen.count(v)) continue;
      seen.insert(v);
      std::vector<int> b = {v - shift};
      for (size_t j = 0; j < alpha.size(); ++j)
        if (j != i) b.push_back(alpha[j]);
      bases.push_back(std::move(b));
    }
    return bases;
  };

  auto push = [&](std::vector<Strategy::Piece> pieces, std::vector<int> base,
                  std::string note, int base_d = 0) {
    out.push_back(Strategy{std::move(pieces), std::move(base), base_d,
                           std::move(note)});
  };

  // dynamic pools: every three-letter tuple for the three-point relation and
  // four-letter tuple for the four-point one; combinations are solved for at
  // run time, so breadth costs only cached expansions
  auto pool = [&](bool with_e) {
    std::vector<Strategy::Piece> pieces;
    const char* letters = with_e ? "EHp" : "Hp";
    std::string a;
    std::function<void(size_t, std::string)> gen3 = [&](size_t i,
                                                        std::string cur) {
      if (cur.size() == 3) {
        pieces.push_back({Rat(1), "bp_2_3", cur});
        return;
      }
      for (const char* c = letters + i; *c; ++c)
        gen3(size_t(c - letters), cur + *c);
    };
    gen3(0, "");
    std::function<void(size_t, std::string)> gen4 = [&](size_t i,
                                                        std::string cur) {
      if (cur.size() == 4) {
        pieces.push_back({Rat(1), "l_2_4", cur});
        return;
      }
      for (const char* c = letters + i; *c; ++c)
        gen4(size_t(c - letters), cur + *c);
    };
    gen4(0, "");
    return pieces;
  };

  if (key.type == 'N' && key.g == 0) {
    push({{Rat(1), "wdvv_0_4", "HHpp"}}, alpha, "genus-0 point route");
    for (auto& b : base_with_walk(1, 1))
      push({{Rat(1), "wdvv_0_4", "HHEE"}}, b, "genus-0 exceptional route");
    if (!alpha.empty())
      push({{Rat(1), "wdvv_0_4", "HHEE"}}, alpha, "genus-0 base slot");
  } else if (key.type == 'N' && key.g == 1) {
    push({{Rat(1), "getzler_1_4", "HHHH"}}, alpha, "genus-1 point route");
    for (auto& b : base_with_walk(2, 2))
      push({{Rat(1), "getzler_1_4", "EEEE"}}, b, "genus-1 exceptional route");
    for (auto& b : base_with_walk(1, 1))
      push({{Rat(1), "getzler_1_4", "EEEE"}}, b, "genus-1 exceptional shift 1");
    if (!alpha.empty())
      push({{Rat(1), "getzler_1_4", "EEEE"}}, alpha, "genus-1 base slot");
  } else if (key.type == 'N' && key.g == 2) {
    std::vector<Strategy::Piece> combo = {{Rat(1), "bp_2_3", "EHH"},
                                          {Rat(1), "bp_2_3", "EEH"},
                                          {Rat(1), "bp_2_3", "HHH"}};
    for (auto& b : base_with_walk(1, 1))
      push(combo, b, "genus-2 primary combination");
    for (auto& b : base_with_walk(1, 1))
      push(pool(true), b, "genus-2 primary pool");
    for (auto& b : base_with_walk(2, 2))
      push(pool(true), b, "genus-2 primary pool shift 2");
    // plane fallbacks: the target appears multiplied by a degree-1 factor,
    // so the expansion runs one degree higher
    for (const char* ins : {"pppp", "Hppp", "HHpp"})
      push({{Rat(1), "l_2_4", ins}}, alpha, "genus-2 plane route", key.d + 1);
    push(pool(!alpha.empty()), alpha, "genus-2 plane pool", key.d + 1);
  } else if (key.type == 'H') {
    for (auto& b : base_with_walk(1, 1))
      push({{Rat(1), "l_2_4", "HEEE"}}, b, "descendant H route");
    for (auto& b : base_with_walk(2, 2))
      push({{Rat(1), "l_2_4", "HEEE"}}, b, "descendant H route shift 2");
    if (!alpha.empty()) {
      push({{Rat(1), "l_2_4", "HEEE"}}, alpha, "descendant H base slot");
      push(pool(true), alpha, "descendant H pool");
    }
    for (auto& b : base_with_walk(1, 1))
      push(pool(true), b, "descendant H pool shift 1");
    push({{Rat(1), "bp_2_3", "HHH"}}, alpha, "descendant H plane route");
    push({{Rat(1), "l_2_4", "HHHH"}}, alpha, "descendant H via four points");
    push(pool(!alpha.empty()), alpha, "descendant H plane pool");
    push(pool(!alpha.empty()), alpha, "descendant H raised pool", key.d + 1);
  } else if (key.type == 'P') {
    push({{Rat(1), "bp_2_3", "HHH"}}, alpha, "descendant P route");
    push({{Rat(1), "bp_2_3", "HHp"}}, alpha, "descendant P fallback");
    push(pool(!alpha.empty()), alpha, "descendant P pool");
    for (auto& b : base_with_walk(1, 1))
      push(pool(true), b, "descendant P pool shift 1");
    push(pool(!alpha.empty()), alpha, "descendant P raised pool", key.d + 1);
  } else if (key.type == 'K') {
    push({{Rat(1), "bp_2_3", "EEE"}}, alpha, "descendant K route");
    push(pool(true), alpha, "descendant K pool");
    if (!alpha.empty() && alpha[0] >= 1) {
      std::vector<int> b = alpha;
      b[0] -= 1;
      push({{Rat(1), "bp_2_3", "EEE"}}, b, "descendant K route shift 1");
      push(pool(true), b, "descendant K pool shift 1");
    }
    push(pool(true), alpha, "descendant K raised pool", key.d + 1);
  }
  return out;
}

std::optional<Rat> Solver::try_strategy(const InvariantKey& key,
                                        const Strategy& st) {
  auto bail = [&](const char* why) -> std::optional<Rat> {
    if (opt_.trace)
      std::cerr << "  [" << key.str() << " / " << st.note << "] " << why
                << "\n";
    return std::nullopt;
  };
  bool uses_e = false;
  for (const auto& p : st.pieces)
    for (char c : p.insertions)
      if (c == 'E') uses_e = true;
  int r = int(st.base_alpha.size());
  if (uses_e) r = std::max(r, 1);
  Ring& R = ring(r);
  const Surface& s = *R.surface;

  int base_d = st.base_d > 0 ? st.base_d : key.d;
  CurveVec beta(base_d, st.base_alpha);
  beta.a.resize(size_t(r), 0);
  auto cls = s.classify(beta);
  if (!cls || cls->kind != CurveClass::Kind::mixed)
    return bail("base class not effective");

  std::vector<const KeyPolynomial*> polys;
  for (const auto& piece : st.pieces) {
    auto ait = assets_.find(piece.relation);
    if (ait == assets_.end()) return bail("relation asset missing");
    const RelationElement& rel = ait->second.payload;
    if (int(piece.insertions.size()) != rel.n())
      return bail("insertion arity mismatch");
    if (rel.g() != key.g) return bail("genus mismatch");
    int insdeg = 0;
    for (char c : piece.insertions) insdeg += letter_degree(c);
    int m = s.anticanonical_degree(beta) + key.g - 1 + rel.n() - rel.codim() -
            insdeg;
    if (m < 0) return bail("negative point count");

    auto ckey = std::make_tuple(piece.relation, piece.insertions, m, beta);
    auto cit = expansion_cache_.find(ckey);
    if (cit == expansion_cache_.end()) {
      std::vector<int> ins;
      for (char c : piece.insertions) ins.push_back(letter_basis(s, c));
      KeyPolynomial kp;
      try {
        kp = R.engine->expand_reduced(rel, ins, m, *cls);
      } catch (const NonTaxonomyError& e) {
        if (opt_.trace) std::cerr << "  nontaxonomy: " << e.what() << "\n";
        return std::nullopt;
      }
      cit = expansion_cache_.emplace(ckey, std::move(kp)).first;
    }
    polys.push_back(&cit->second);
  }

  // Keys the current target must never depend on: same-surface genus-2
  // families computed later in the family order H < P < N < K, or anything
  // of the target's genus above its degree.
  auto family_order = [](char t) {
    switch (t) {
      case 'H': return 0;
      case 'P': return 1;
      case 'N': return 2;
      case 'K': return 3;
    }
    return 4;
  };
  auto unknown = [&](const InvariantKey& k) {
    if (k == key) return false;
    if (k.g != key.g || key.g != 2) return false;
    if (k.d > key.d) return true;
    if (k.d < key.d) return false;
    if (k.type == key.type) return false;  // sibling chains are fine
    return family_order(k.type) > family_order(key.type);
  };
  // monomials that must be cancelled by the combination
  std::set<KeyMonomial> cancel;
  for (const auto* p : polys)
    for (const auto& [mono, c] : p->terms)
      for (const auto& k2 : mono)
        if (unknown(k2)) {
          cancel.insert(mono);
          break;
        }

  // solve for combination coefficients x killing the cancel set
  size_t np = polys.size();
  std::vector<Rat> x;
  if (cancel.empty() && np == 1) {
    x = {Rat(1)};
  } else {
    std::vector<std::vector<Rat>> rows;
    for (const auto& mono : cancel) {
      std::vector<Rat> row;
      for (const auto* p : polys) {
        auto it = p->terms.find(mono);
        row.push_back(it == p->terms.end() ? Rat(0) : it->second);
      }
      rows.push_back(std::move(row));
    }
    // gaussian elimination; extract kernel basis of the piece-space
    size_t rank = 0;
    std::vector<size_t> pivot_col;
    for (size_t c = 0; c < np && rank < rows.size(); ++c) {
      size_t pr = rank;
      while (pr < rows.size() && rows[pr][c] == 0) ++pr;
      if (pr == rows.size()) continue;
      std::swap(rows[rank], rows[pr]);
      Rat inv = Rat(1) / rows[rank][c];
      for (size_t cc = 0; cc < np; ++cc) rows[rank][cc] *= inv;
      for (size_t rr = 0; rr < rows.size(); ++rr) {
        if (rr == rank || rows[rr][c] == 0) continue;
        Rat f = rows[rr][c];
        for (size_t cc = 0; cc < np; ++cc) rows[rr][cc] -= f * rows[rank][cc];
      }
      pivot_col.push_back(c);
      ++rank;
    }
    std::set<size_t> pivots(pivot_col.begin(), pivot_col.end());
    std::vector<std::vector<Rat>> basis;
    for (size_t c = 0; c < np; ++c) {
      if (pivots.count(c)) continue;
      std::vector<Rat> v(np, Rat(0));
      v[c] = 1;
      for (size_t rr = 0; rr < rank; ++rr) v[pivot_col[rr]] = -rows[rr][c];
      basis.push_back(std::move(v));
    }
    if (basis.empty()) return bail("no cancelling combination");
    // choose a kernel vector with a nonzero target coefficient
    auto target_coeff = [&](const std::vector<Rat>& v) {
      Rat c(0);
      for (size_t i = 0; i < np; ++i) {
        if (v[i] == 0) continue;
        for (const auto& [mono, cm] : polys[i]->terms) {
          int hits = 0;
          for (const auto& k2 : mono)
            if (k2 == key) ++hits;
          if (hits == 1 && mono.size() == 1) c += v[i] * cm;
        }
      }
      return c;
    };
    for (auto& v : basis) {
      if (target_coeff(v) != 0) {
        x = v;
        break;
      }
    }
    if (x.empty()) x = basis[0];
  }

  KeyPolynomial total;
  for (size_t i = 0; i < np; ++i)
    if (x[i] != 0) total.add(*polys[i], x[i]);

  // isolate the target; it may sit inside product monomials whose other
  // factors are of strictly smaller degree and recursively known
  Rat coeff(0), rest(0);
  for (const auto& [mono, c] : total.terms) {
    int hits = 0;
    for (const auto& k2 : mono)
      if (k2 == key) ++hits;
    if (hits >= 2) return bail("quadratic in the target");
    if (hits == 1) {
      Rat v = c;
      for (const auto& k2 : mono) {
        if (k2 == key) continue;
        if (k2.d >= key.d && k2.g >= key.g)
          throw RankViolationError("cofactor " + k2.str() + " not below " +
                                   key.str());
        v *= invariant(k2);
        if (v == 0) break;
      }
      coeff += v;
      continue;
    }
    for (const auto& k2 : mono) {
      if (unknown(k2)) return bail("uncancelled unknown");
      if (k2.g >= key.g && k2.d > base_d)
        throw RankViolationError(k2.str() + " above base degree of " +
                                 key.str());
    }
    Rat v = c;
    for (const auto& k2 : mono) {
      v *= invariant(k2);
      if (v == 0) break;
    }
    rest += v;
  }
  if (coeff == 0) return bail("target coefficient zero");
  return -rest / coeff;
}

Rat Solver::invariant(const InvariantKey& raw) {
  // reject before optimizing: the trailing-1 identity only relates honest
  // invariants, a negative point count means there is nothing to compute
  InvariantKey canon = InvariantKey::make(raw.type, raw.g, raw.d, raw.alpha);
  if (!canon.valid()) return Rat(0);
  InvariantKey key = apply_optimizations(canon);
  if (!key.valid()) return Rat(0);
  if (auto v = store_.get(key)) return *v;

  // the seed: <pt^2>_{0,H} = 1
  if (key.type == 'N' && key.g == 0 && key.d == 1 && key.alpha.empty()) {
    store_.put(key, Rat(1));
    return Rat(1);
  }

  if (in_progress_.count(key)) throw NoStrategyError("cycle at " + key.str());
  in_progress_.insert(key);
  struct Guard {
    std::set<InvariantKey>& s;
    InvariantKey k;
    ~Guard() { s.erase(k); }
  } guard{in_progress_, key};

  Rat value = compute(key);
  store_.put(key, value);
  return value;
}

Rat Solver::compute(const InvariantKey& key) {
  std::string causes;
  for (const Strategy& st : strategies_for(key)) {
    try {
      auto v = try_strategy(key, st);
      if (v) {
        if (opt_.trace)
          std::cerr << key.str() << " = " << v->str() << "  [" << st.note
                    << "]\n";
        return *v;
      }
    } catch (const NoStrategyError& e) {
      // a dependency could not be resolved: remember why, try the next route
      if (causes.size() < 400) causes += std::string(" <- ") + e.what();
      continue;
    }
  }
  throw NoStrategyError("no strategy for " + key.str() + causes);
}

}  // namespace gw
