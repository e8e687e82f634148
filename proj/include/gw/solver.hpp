#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gw/reduce.hpp"
#include "gw/relation.hpp"
#include "gw/splitting.hpp"

namespace gw {

struct SolverOptions {
  bool cremona = true;
  bool drop_trailing = true;
  // the trailing-1 identity is unproven for g > 0 with more than 8 blowup
  // points; enabling it there needs an explicit opt-in
  bool assume_conjectural = false;
  bool trace = false;
};

struct NoStrategyError : std::runtime_error {
  explicit NoStrategyError(const std::string& w) : std::runtime_error(w) {}
};
struct RankViolationError : std::runtime_error {
  explicit RankViolationError(const std::string& w) : std::runtime_error(w) {}
};

// Thread-safe memo table; first write wins, duplicate writers must agree.
class InvariantStore {
 public:
  std::optional<Rat> get(const InvariantKey& k) const;
  void put(const InvariantKey& k, const Rat& v);
  size_t size() const;

  // tab-separated persistence; entries are only trusted when the checksum
  // header matches the loaded relation assets
  void save(const std::string& path, const std::string& checksum) const;
  // returns false when the file exists but carries a stale checksum
  bool load(const std::string& path, const std::string& checksum);

  std::map<InvariantKey, Rat> snapshot() const;

 private:
  mutable std::mutex mu_;
  std::map<InvariantKey, Rat> vals_;
};

// One reconstruction step: a rational combination of relation expansions
// evaluated at a common base class and insertion tuple.
struct Strategy {
  struct Piece {
    Rat scale;
    std::string relation;
    std::string insertions;  // letters: H, E (= E_1), p (= pt)
  };
  std::vector<Piece> pieces;
  std::vector<int> base_alpha;
  int base_d = 0;  // 0 means the target's degree
  std::string note;
};

class Solver {
 public:
  Solver(std::map<std::string, RelationAsset> assets, SolverOptions opt = {});

  Rat invariant(const InvariantKey& key);

  // The candidate list the solver would try for this key, in order.
  std::vector<Strategy> strategies_for(const InvariantKey& key) const;

  // Canonical form after the optimization moves (sorting, zero and
  // trailing-1 drops, Cremona).  Returns the rewritten key.
  InvariantKey apply_optimizations(const InvariantKey& key) const;

  InvariantStore& store() { return store_; }
  const std::map<std::string, RelationAsset>& assets() const {
    return assets_;
  }
  std::string assets_checksum() const;

  const SolverOptions& options() const { return opt_; }

 private:
  struct Ring {
    std::unique_ptr<Surface> surface;
    std::unique_ptr<Reducer> reducer;
    std::unique_ptr<Engine> engine;
  };
  Ring& ring(int r);

  Rat compute(const InvariantKey& key);
  std::optional<Rat> try_strategy(const InvariantKey& key, const Strategy& st);

  std::map<std::string, RelationAsset> assets_;
  SolverOptions opt_;
  InvariantStore store_;
  std::map<int, Ring> rings_;
  std::set<InvariantKey> in_progress_;
  // per (relation, insertions, extra points, beta) expansion cache
  std::map<std::tuple<std::string, std::string, int, CurveVec>, KeyPolynomial>
      expansion_cache_;
};

}  // namespace gw
