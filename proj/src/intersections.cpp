#include "gw/intersections.hpp"

#include <algorithm>
#include <map>

namespace gw {
namespace {

Rat doublefact(int n) {  // n!! with (-1)!! = 1
  Rat r(1);
  for (int k = n; k >= 2; k -= 2) r *= k;
  return r;
}

using Key = std::pair<int, std::vector<int>>;
std::map<Key, Rat>& cache() {
  static std::map<Key, Rat> c;
  return c;
}

Rat compute(int g, const std::vector<int>& a);

Rat lookup(int g, std::vector<int> a) {
  std::sort(a.begin(), a.end());
  int n = int(a.size());
  long sum = 0;
  for (int x : a) sum += x;
  if (g < 0) return Rat(0);
  if (sum != 3L * g - 3 + n) return Rat(0);
  if (g == 0 && n < 3) return Rat(0);
  if (g == 1 && n < 1) return Rat(0);
  if (g == 0 && n == 3) return Rat(1);
  if (g == 1 && n == 1) return Rat(1, 24);
  Key key{g, a};
  auto it = cache().find(key);
  if (it != cache().end()) return it->second;
  Rat v = compute(g, a);
  cache().emplace(key, v);
  return v;
}

// Witten-Kontsevich via the DVV recursion, applied at the largest index.
Rat compute(int g, const std::vector<int>& a) {
  int k1 = a.back();  // = k+1
  if (k1 == 0) return Rat(0);
  int k = k1 - 1;
  std::vector<int> rest(a.begin(), a.end() - 1);

  Rat total(0);
  for (size_t j = 0; j < rest.size(); ++j) {
    std::vector<int> b = rest;
    b.erase(b.begin() + long(j));
    b.push_back(rest[j] + k);
    total += doublefact(2 * (k + rest[j]) + 1) / doublefact(2 * rest[j] - 1) *
             lookup(g, b);
  }
  for (int x = 0; x <= k - 1; ++x) {
    int y = k - 1 - x;
    Rat w = doublefact(2 * x + 1) * doublefact(2 * y + 1);
    {
      std::vector<int> b = rest;
      b.push_back(x);
      b.push_back(y);
      total += w / 2 * lookup(g - 1, b);
    }
    int m = int(rest.size());
    for (int g1 = 0; g1 <= g; ++g1) {
      int g2 = g - g1;
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> s1 = {x}, s2 = {y};
        for (int i = 0; i < m; ++i) {
          if (mask & (1 << i))
            s1.push_back(rest[size_t(i)]);
          else
            s2.push_back(rest[size_t(i)]);
        }
        total += w / 2 * lookup(g1, s1) * lookup(g2, s2);
      }
    }
  }
  return total / doublefact(2 * k1 + 1);
}

}  // namespace

Rat psi_intersection(int g, std::vector<int> a) {
  for (int x : a)
    if (x < 0) return Rat(0);
  return lookup(g, std::move(a));
}

}  // namespace gw
