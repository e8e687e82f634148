#include "doctest.h"
#include "gw/reduce.hpp"

#include <random>

using namespace gw;

namespace {

FormalInvariant mk(int g, CurveVec beta, std::vector<Insertion> ins) {
  FormalInvariant f;
  f.g = g;
  f.beta = std::move(beta);
  f.ins = std::move(ins);
  return f;
}

}  // namespace

TEST_CASE("degree zero base cases") {
  Surface s(2);
  Reducer red(s);
  // <H>_{1,0} = -1/8
  CHECK(red.eval_degree_zero(1, {{0, s.h_idx()}}) == Rat(-1, 8));
  // <E_i>_{1,0} = -1/24
  CHECK(red.eval_degree_zero(1, {{0, s.e_idx(1)}}) == Rat(-1, 24));
  CHECK(red.eval_degree_zero(1, {{0, s.e_idx(2)}}) == Rat(-1, 24));
  // <tau_1(H)>_{2,0} = -1/960, <tau_1(E_1)>_{2,0} = -1/2880
  CHECK(red.eval_degree_zero(2, {{1, s.h_idx()}}) == Rat(-1, 960));
  CHECK(red.eval_degree_zero(2, {{1, s.e_idx(1)}}) == Rat(-1, 2880));
  // three-point: integral of the triple product
  CHECK(red.eval_degree_zero(
            0, {{0, s.h_idx()}, {0, s.h_idx()}, {0, s.unit_idx()}}) == 1);
  CHECK(red.eval_degree_zero(
            0, {{0, s.e_idx(1)}, {0, s.e_idx(1)}, {0, s.unit_idx()}}) == -1);
  CHECK(red.eval_degree_zero(
            0, {{0, s.pt_idx()}, {0, s.pt_idx()}, {0, s.unit_idx()}}) == 0);
  // dilaton special case <tau_1(1)>_{1,0} = -(3+r)/24
  CHECK(red.eval_degree_zero(1, {{1, s.unit_idx()}}) == Rat(-5, 24));
}

TEST_CASE("exceptional evaluations") {
  Surface s(1);
  Reducer red(s);
  CHECK(red.eval_exceptional(0, 1, 1, {}) == 1);
  CHECK(red.eval_exceptional(0, 1, 2, {}) == 0);
  CHECK(red.eval_exceptional(1, 1, 1, {}) == 0);
  // <E_1>_{0,E_1} = -1 via the divisor equation
  CHECK(red.eval_exceptional(0, 1, 1, {{0, s.e_idx(1)}}) == -1);
  // <E_1,E_1>_{0,E_1} = +1
  CHECK(red.eval_exceptional(0, 1, 1, {{0, s.e_idx(1)}, {0, s.e_idx(1)}}) == 1);
  // dimension mismatch
  CHECK(red.eval_exceptional(0, 1, 1, {{0, s.pt_idx()}}) == 0);
}

TEST_CASE("string equation") {
  Surface s(1);
  Reducer red(s);
  CurveVec beta(1, {0});
  // <tau_0(1), pt, pt>_{0,beta} -> 0 (no positive psi powers)
  auto p = red.apply_string(
      mk(0, beta, {{0, s.unit_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}}));
  CHECK(p.empty());
  // <tau_1(pt), tau_0(1), pt>_2 -> <tau_0(pt), pt>_2
  auto q = red.apply_string(
      mk(2, beta, {{1, s.pt_idx()}, {0, s.unit_idx()}, {0, s.pt_idx()}}));
  REQUIRE(q.terms.size() == 1);
  const auto& [mono, c] = *q.terms.begin();
  CHECK(c == 1);
  REQUIRE(mono.size() == 1);
  CHECK(mono[0].ins.size() == 2);
  CHECK(mono[0].ins[0].psi == 0);
  CHECK(mono[0].ins[1].psi == 0);
  // beta = 0 special case routes to the closed table
  auto r0 = red.apply_string(
      mk(0, CurveVec(0, {0}),
         {{0, s.unit_idx()}, {0, s.h_idx()}, {0, s.h_idx()}}));
  REQUIRE(r0.terms.size() == 1);
  CHECK(r0.terms.begin()->first.empty());
  CHECK(r0.terms.begin()->second == 1);
}

TEST_CASE("divisor equation") {
  Surface s(1);
  Reducer red(s);
  CurveVec H1(1, {0});
  // <tau_0(H), pt, pt>_{0,H} = 1 * <pt,pt>
  auto p = red.apply_divisor(
      mk(0, H1, {{0, s.h_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}}), 0);
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms.begin()->second == 1);
  // <tau_1(pt), tau_0(H), pt^2>: correction has pt cup H = 0, only d * rest
  auto q = red.apply_divisor(
      mk(0, CurveVec(2, {0}),
         {{1, s.pt_idx()}, {0, s.h_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}}),
      1);
  REQUIRE(q.terms.size() == 1);
  CHECK(q.terms.begin()->second == 2);
  // <tau_1(H), tau_0(H), ...>: correction tau_0(H cup H = pt) appears
  auto r = red.apply_divisor(
      mk(0, CurveVec(2, {0}),
         {{1, s.h_idx()}, {0, s.h_idx()}, {0, s.pt_idx()}}),
      1);
  CHECK(r.terms.size() == 2);
  // divisor against the exceptional seed: <E_1>_{0,E_1}
  auto e = red.apply_divisor(
      mk(0, CurveVec(0, {-1}), {{0, s.e_idx(1)}}), 0);
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms.begin()->second == -1);
}

TEST_CASE("dilaton equation") {
  Surface s(1);
  Reducer red(s);
  auto p = red.apply_dilaton(
      mk(0, CurveVec(1, {0}),
         {{1, s.unit_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}}));
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms.begin()->second == 1);  // 2g-2+n = -2+3
  auto q = red.apply_dilaton(mk(1, CurveVec(0, {0}), {{1, s.unit_idx()}}));
  REQUIRE(q.terms.size() == 1);
  CHECK(q.terms.begin()->first.empty());
  CHECK(q.terms.begin()->second == Rat(-4, 24));  // -(3+1)/24
  std::vector<Insertion> big = {{1, s.unit_idx()}};
  for (int i = 0; i < 8; ++i) big.push_back({0, s.pt_idx()});
  auto r = red.apply_dilaton(mk(2, CurveVec(3, {1}), big));
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms.begin()->second == 10);
}

TEST_CASE("reduce to taxonomy keys") {
  Surface s(1);
  Reducer red(s);
  // <tau_0(H), pt, pt>_{0,H} -> 1 * N(0,1,())
  auto p = red.reduce(mk(0, CurveVec(1, {0}),
                         {{0, s.h_idx()}, {0, s.pt_idx()}, {0, s.pt_idx()}}));
  REQUIRE(p.terms.size() == 1);
  auto [m, c] = *p.terms.begin();
  CHECK(c == 1);
  REQUIRE(m.size() == 1);
  CHECK(m[0].type == 'N');
  CHECK(m[0].d == 1);
  CHECK(m[0].alpha.empty());

  // K-type with index relabeling: tau_1(E_2) at d=3 with alpha_2 = 1
  Surface s2(2);
  Reducer red2(s2);
  std::vector<Insertion> kk = {{1, s2.e_idx(2)}};
  for (int i = 0; i < 8; ++i) kk.push_back({0, s2.pt_idx()});
  auto q = red2.reduce(mk(2, CurveVec(3, {0, 1}), kk));
  REQUIRE(q.terms.size() == 1);
  auto [m2, c2] = *q.terms.begin();
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].type == 'K');
  CHECK(m2[0].alpha == std::vector<int>{1});

  // descendant order >= 2 at genus 2 is rejected
  std::vector<Insertion> bad = {{2, s.pt_idx()}, {0, s.pt_idx()}};
  CHECK_THROWS_AS(red.reduce(mk(2, CurveVec(1, {0}), bad)), NonTaxonomyError);
}

TEST_CASE("genus 0 one-point descendant via topological recursion") {
  // <tau_1(pt)>_{0,H} = <pt,pt>_{0,H}, i.e. reduces to 1 * N(0,1,())
  Surface s(0);
  Reducer red(s);
  auto p = red.reduce(mk(0, CurveVec(1, {}), {{1, s.pt_idx()}}));
  REQUIRE(p.terms.size() == 1);
  auto [m, c] = *p.terms.begin();
  CHECK(c == 1);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == InvariantKey::make('N', 0, 1, {}));
}

TEST_CASE("dimension-inadmissible inputs vanish") {
  Surface s(1);
  Reducer red(s);
  CHECK(red.reduce(mk(0, CurveVec(1, {0}), {{0, s.pt_idx()}})).empty());
  CHECK(red.reduce(mk(1, CurveVec(0, {0}), {{0, s.pt_idx()}})).empty());
}

TEST_CASE("key canonical forms") {
  auto k = InvariantKey::make('N', 1, 4, {0, 2, 1, 0});
  CHECK(k.alpha == std::vector<int>{2, 1});
  CHECK(k.points() == 3 * 4 - 3 + 1 - 1);
  auto kk = InvariantKey::make('K', 2, 3, {1, 0, 2});
  CHECK(kk.alpha == std::vector<int>{1, 2});
  CHECK(kk.valid());
  auto kp = InvariantKey::make('P', 2, 4, {2});
  CHECK(kp.points() == 12 - 2 - 1);
}

TEST_CASE("reduction order commutes") {
  Surface s(1);
  Reducer red(s);
  std::mt19937 rng(4242);
  int done = 0;
  for (int trial = 0; trial < 4000 && done < 500; ++trial) {
    int g = int(rng() % 3);
    int d = 1 + int(rng() % 3);
    int a = int(rng() % (unsigned(d) + 1));
    CurveVec beta(d, {a});
    std::vector<Insertion> ins;
    ins.push_back({0, s.unit_idx()});
    ins.push_back({1, s.unit_idx()});
    ins.push_back({0, int(rng() % 2) ? s.h_idx() : s.e_idx(1)});
    ins.push_back({1, s.pt_idx()});
    // each pt insertion adds 2 to the degree but 1 to the dimension, so the
    // deficit vdim(4) - deg(base) is filled with that many points
    int vdim = s.expected_dim(g, beta, 4);
    int have = 0 + 1 + 1 + 3;
    int extra = vdim - have;
    if (extra < 0) continue;
    for (int i = 0; i < extra; ++i) ins.push_back({0, s.pt_idx()});
    FormalInvariant inv = mk(g, beta, ins);
    {
      int degs = 0;
      for (auto& i : inv.ins) degs += s.complex_deg(i.cls) + i.psi;
      REQUIRE(degs == s.expected_dim(g, beta, int(inv.ins.size())));
    }

    KeyPolynomial a1;
    try {
      a1 = red.reduce(inv);
    } catch (const NonTaxonomyError&) {
      continue;
    }

    // alternative order: one divisor step first, then full reduction
    auto pb = red.apply_divisor(inv, 2);
    KeyPolynomial b1;
    try {
      for (auto& [mono, c] : pb.terms) {
        KeyPolynomial prod = KeyPolynomial::constant(Rat(1));
        for (auto& f : mono) prod = prod * red.reduce(f);
        b1.add(prod, c);
      }
    } catch (const NonTaxonomyError&) {
      continue;
    }
    CHECK(a1.terms == b1.terms);

    // alternative order: dilaton step first
    auto pc = red.apply_dilaton(inv);
    KeyPolynomial c1;
    try {
      for (auto& [mono, c] : pc.terms) {
        KeyPolynomial prod = KeyPolynomial::constant(Rat(1));
        for (auto& f : mono) prod = prod * red.reduce(f);
        c1.add(prod, c);
      }
    } catch (const NonTaxonomyError&) {
      continue;
    }
    CHECK(a1.terms == c1.terms);
    ++done;
  }
  CHECK(done >= 400);
}
