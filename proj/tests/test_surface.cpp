#include "doctest.h"
#include "gw/surface.hpp"

#include <random>

using namespace gw;

TEST_CASE("basis layout") {
  Surface s0(0);
  CHECK(s0.basis_size() == 3);
  CHECK(s0.basis_name(0) == "1");
  CHECK(s0.basis_name(1) == "H");
  CHECK(s0.basis_name(2) == "pt");

  Surface s2(2);
  CHECK(s2.basis_size() == 5);
  CHECK(s2.basis_name(s2.e_idx(1)) == "E1");
  CHECK(s2.basis_name(s2.e_idx(2)) == "E2");

  Surface s8(8);
  CHECK(int(s8.basis().size()) == 11);
}

TEST_CASE("cup products") {
  Surface s(2);
  auto H = s.basis_class(s.h_idx());
  auto E1 = s.basis_class(s.e_idx(1));
  auto E2 = s.basis_class(s.e_idx(2));
  auto pt = s.basis_class(s.pt_idx());

  auto HH = s.cup(H, H);
  CHECK(HH.c[s.pt_idx()] == 1);
  auto HE = s.cup(H, E1);
  for (const auto& c : HE.c) CHECK(c == 0);
  auto E11 = s.cup(E1, E1);
  CHECK(E11.c[s.pt_idx()] == -1);
  auto E12 = s.cup(E1, E2);
  for (const auto& c : E12.c) CHECK(c == 0);
  auto top = s.cup(pt, H);
  for (const auto& c : top.c) CHECK(c == 0);
}

TEST_CASE("pairing") {
  Surface s(1);
  auto one = s.basis_class(s.unit_idx());
  auto H = s.basis_class(s.h_idx());
  auto E1 = s.basis_class(s.e_idx(1));
  auto pt = s.basis_class(s.pt_idx());
  CHECK(s.pair(H, H) == 1);
  CHECK(s.pair(one, pt) == 1);
  CHECK(s.pair(E1, E1) == -1);
  CHECK(s.pair(H, E1) == 0);
}

TEST_CASE("diagonal is a resolution of identity") {
  for (int r : {0, 1, 3}) {
    Surface s(r);
    for (int bx = 0; bx < s.basis_size(); ++bx) {
      for (int by = 0; by < s.basis_size(); ++by) {
        Rat sum(0);
        for (const auto& t : s.diagonal_terms())
          sum += t.weight * s.pair_basis(bx, t.e) * s.pair_basis(t.f, by);
        CHECK(sum == s.pair_basis(bx, by));
      }
    }
  }
}

TEST_CASE("diagonal terms r=0 and r=1") {
  Surface s0(0);
  CHECK(s0.diagonal_terms().size() == 3);
  Surface s1(1);
  bool found = false;
  for (const auto& t : s1.diagonal_terms())
    if (t.e == s1.e_idx(1) && t.f == s1.e_idx(1) && t.weight == -1) found = true;
  CHECK(found);
}

TEST_CASE("degree_on_curve") {
  Surface s(1);
  auto beta = CurveClass::make_mixed(4, {2});
  CHECK(s.degree_on_curve(s.anticanonical(), beta) == 10);
  auto e = CurveClass::make_exceptional(1, 1);
  auto H = s.basis_class(s.h_idx());
  CHECK(s.degree_on_curve(H, e) == 0);
  auto E1 = s.basis_class(s.e_idx(1));
  CHECK(s.degree_on_curve(E1, CurveClass::make_mixed(3, {1})) == 1);
  CHECK(s.degree_on_curve(E1, e) == -1);
}

TEST_CASE("expected_dim") {
  Surface s0(0);
  CHECK(s0.expected_dim(0, CurveClass::make_mixed(1, {}), 2) == 4);
  // <pt^2>_{0,H}: two point insertions of complex degree 2 each
  Surface s1(1);
  CHECK(s1.expected_dim(2, CurveClass::make_mixed(3, {1}), 9) == 18);
  CHECK(s1.expected_dim(1, CurveClass::make_zero(), 1) == 1);
  CHECK(s1.expected_dim(0, CurveClass::make_exceptional(1, 2), 1) == 2);
}

TEST_CASE("effectivity") {
  Surface s1(1);
  CHECK_FALSE(s1.is_effective(CurveClass::make_mixed(1, {2})));
  CHECK(s1.is_effective(CurveClass::make_exceptional(1, 1)));
  Surface s3(3);
  CHECK(s3.is_effective(CurveClass::make_mixed(2, {1, 1, 1})));
  CHECK(s3.is_effective(CurveClass::make_zero()));
}

TEST_CASE("effectivity by exhaustion, d <= 4, r <= 3") {
  for (int r = 0; r <= 3; ++r) {
    Surface s(r);
    for (int d = 1; d <= 4; ++d) {
      std::vector<int> a(size_t(r), 0);
      // enumerate all alpha in [-1, d+1]^r and compare with the rule
      std::function<void(int)> rec = [&](int i) {
        if (i == r) {
          auto beta = CurveClass::make_mixed(d, a);
          bool expect = true;
          for (int x : a)
            if (x < 0 || x > d) expect = false;
          CHECK(s.is_effective(beta) == expect);
          return;
        }
        for (int x = -1; x <= d + 1; ++x) {
          a[size_t(i)] = x;
          rec(i + 1);
        }
      };
      rec(0);
    }
  }
}

TEST_CASE("dimension formula random consistency") {
  std::mt19937 rng(12345);
  Surface s(3);
  for (int t = 0; t < 100; ++t) {
    int g = int(rng() % 3);
    int d = 1 + int(rng() % 6);
    std::vector<int> a;
    for (int i = 0; i < 3; ++i) a.push_back(int(rng() % size_t(d + 1)));
    int n = int(rng() % 10);
    auto beta = CurveClass::make_mixed(d, a);
    Rat lhs = s.degree_on_curve(s.anticanonical(), beta) + (g - 1) + n;
    CHECK(lhs == s.expected_dim(g, beta, n));
  }
}

TEST_CASE("classify curve vectors") {
  Surface s(2);
  CHECK(s.classify(CurveVec(0, {0, 0}))->kind == CurveClass::Kind::zero);
  auto e = s.classify(CurveVec(0, {0, -2}));
  REQUIRE(e.has_value());
  CHECK(e->kind == CurveClass::Kind::exceptional);
  CHECK(e->idx == 2);
  CHECK(e->mult == 2);
  CHECK_FALSE(s.classify(CurveVec(0, {-1, -1})).has_value());
  CHECK_FALSE(s.classify(CurveVec(0, {1, 0})).has_value());
  CHECK_FALSE(s.classify(CurveVec(2, {3, 0})).has_value());
  CHECK(s.classify(CurveVec(2, {2, 1}))->kind == CurveClass::Kind::mixed);
}
