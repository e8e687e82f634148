#include "doctest.h"
#include "gw/intersections.hpp"

using namespace gw;

TEST_CASE("genus 0 closed form") {
  CHECK(psi_intersection(0, {0, 0, 0}) == 1);
  CHECK(psi_intersection(0, {1, 0, 0, 0}) == 1);
  CHECK(psi_intersection(0, {2, 0, 0, 0, 0}) == 1);
  CHECK(psi_intersection(0, {1, 1, 0, 0, 0}) == 2);
  // (n-3)! / prod a_i!
  CHECK(psi_intersection(0, {1, 1, 1, 0, 0, 0}) == 6);
  CHECK(psi_intersection(0, {3, 0, 0, 0, 0, 0}) == 1);
  CHECK(psi_intersection(0, {2, 1, 0, 0, 0, 0}) == 3);
}

TEST_CASE("genus 1 values") {
  CHECK(psi_intersection(1, {1}) == Rat(1, 24));
  CHECK(psi_intersection(1, {0, 2}) == Rat(1, 24));
  CHECK(psi_intersection(1, {1, 1}) == Rat(1, 24));
  CHECK(psi_intersection(1, {0, 0, 3}) == Rat(1, 24));
  CHECK(psi_intersection(1, {0, 1, 2}) == Rat(1, 12));
  CHECK(psi_intersection(1, {1, 1, 1}) == Rat(1, 12));
}

TEST_CASE("genus 2 values") {
  CHECK(psi_intersection(2, {4}) == Rat(1, 1152));
  CHECK(psi_intersection(2, {0, 5}) == Rat(1, 1152));
  CHECK(psi_intersection(2, {1, 4}) == Rat(1, 384));
  CHECK(psi_intersection(2, {2, 3}) == Rat(29, 5760));
}

TEST_CASE("dimension mismatch vanishes") {
  CHECK(psi_intersection(0, {0, 0, 0, 0}) == 0);
  CHECK(psi_intersection(1, {2}) == 0);
  CHECK(psi_intersection(2, {0}) == 0);
  CHECK(psi_intersection(0, {0, 0}) == 0);
}

TEST_CASE("string and dilaton consistency") {
  // string: <tau_0 prod tau_{a_i}> = sum_i <... tau_{a_i - 1} ...>
  auto string_rhs = [](int g, std::vector<int> a) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      std::vector<int> b = a;
      b[i] -= 1;
      s += psi_intersection(g, b);
    }
    return s;
  };
  for (auto [g, a] : std::vector<std::pair<int, std::vector<int>>>{
           {1, {2, 1}}, {2, {4, 2}}, {2, {3, 3}}, {1, {1, 1, 1}}}) {
    std::vector<int> withz = a;
    withz.push_back(0);
    CHECK(psi_intersection(g, withz) == string_rhs(g, a));
  }
  // dilaton: <tau_1 prod> = (2g-2+n) <prod>
  for (auto [g, a] : std::vector<std::pair<int, std::vector<int>>>{
           {2, {4}}, {1, {1}}, {2, {2, 3}}}) {
    std::vector<int> with1 = a;
    with1.push_back(1);
    Rat expect = Rat(2 * g - 2 + int(a.size())) * psi_intersection(g, a);
    CHECK(psi_intersection(g, with1) == expect);
  }
}
