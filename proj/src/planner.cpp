// Copyright 2026 The Tetherplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tetherplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

namespace tetherplan {

void PlannerConfig::validate() const {
  if (!(utility_regularizer > 0.0)) {
    throw ConfigError("utility regularizer must be positive");
  }
  if (label_budget == 0) throw ConfigError("label budget must be positive");
  if (accumulate_reward &&
      !(reward_discount > 0.0 && reward_discount <= 1.0)) {
    throw ConfigError("reward discount must lie in (0, 1]");
  }
}

namespace {

// The 26 one-cell moves in a fixed order (lexicographic over dx, dy, dz).
struct Move {
  int dx, dy, dz;
};

const std::vector<Move>& moves26() {
  static const std::vector<Move> moves = [] {
    std::vector<Move> m;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx || dy || dz) m.push_back({dx, dy, dz});
        }
      }
    }
    return m;
  }();
  return moves;
}

// Contact stack fingerprint: contact coordinates quantized well below the
// placement resolution, so equal stacks compare equal and distinct corner
// choices stay distinct.
std::vector<std::int64_t> contact_signature(const TetherState& t,
                                            double cell_size) {
  std::vector<std::int64_t> sig;
  sig.reserve(t.contacts().size() * 3);
  for (const Vec3& cp : t.contacts()) {
    sig.push_back(std::llround(cp.x / cell_size * 4096.0));
    sig.push_back(std::llround(cp.y / cell_size * 4096.0));
    sig.push_back(std::llround(cp.z / cell_size * 4096.0));
  }
  return sig;
}

struct LabelKey {
  std::size_t cell_index;
  int dir;
  std::vector<std::int64_t> signature;
  friend bool operator==(const LabelKey&, const LabelKey&) = default;
};

struct LabelKeyHash {
  std::size_t operator()(const LabelKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(k.cell_index);
    mix(static_cast<std::uint64_t>(k.dir + 1));
    for (std::int64_t v : k.signature) mix(static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

struct Label {
  Cell cell;
  int dir = -1;  // index into moves26(), -1 for the root
  Vec3 action;   // incoming action vector, valid when dir >= 0
  TetherState tether;
  RiskBreakdown risk;
  double total = 0.0;
  double reward_collected = 0.0;  // discounted sum, accumulate mode only
  int depth = 0;
  int parent = -1;
  bool dead = false;

  Label(const Cell& c, TetherState t) : cell(c), tether(std::move(t)) {}
};

struct HeapEntry {
  double total;
  int serial;
  friend bool operator>(const HeapEntry& a, const HeapEntry& b) {
    return std::tie(a.total, a.serial) > std::tie(b.total, b.serial);
  }
};

// Deterministic preference order over candidate results: utility first, then
// lower risk, then lexicographic cell order.
bool better_candidate(double u1, double r1, const Cell& c1, double u2,
                      double r2, const Cell& c2) {
  if (u1 != u2) return u1 > u2;
  if (r1 != r2) return r1 < r2;
  return c1 < c2;
}

class SearchEngine {
 public:
  using RewardFn = std::function<double(const Cell&)>;

  SearchEngine(const GridWorld& world, const RiskWeights& weights,
               const PlannerConfig& config, Cell start, const Vec3& anchor,
               RewardFn cell_reward)
      : world_(world),
        config_(config),
        acc_(world, weights),
        cell_reward_(std::move(cell_reward)) {
    config_.validate();
    if (!world_.is_free(start)) {
      throw CollisionError("start cell in collision");
    }
    if (!anchor.finite()) throw ConfigError("anchor must be finite");
    TetherState root_tether(anchor, world_.center(start));
    if (!tether_feasible(root_tether, world_)) {
      throw TetherInfeasibleError(
          "initial tether from anchor to start is blocked");
    }
    Label root(start, std::move(root_tether));
    root.risk = acc_.start(state_of(root));
    root.total = root.risk.total(acc_.weights());
    if (config_.accumulate_reward) {
      root.reward_collected = cell_reward_(start);
    }
    bucket_insert(std::move(root));
  }

  // Runs to exhaustion, invoking on_settle for every settled label. When
  // stop_at is set, returns right after the first label settles there.
  template <typename F>
  void run(std::optional<Cell> stop_at, F&& on_settle) {
    while (!heap_.empty()) {
      const HeapEntry top = heap_.top();
      heap_.pop();
      if (labels_[top.serial].dead) continue;
      on_settle(top.serial);
      if (stop_at && labels_[top.serial].cell == *stop_at) return;
      expand(top.serial);
    }
  }

  const Label& label(int i) const { return labels_[i]; }

  PathState state_of(const Label& l) const {
    return {l.cell, world_.center(l.cell), l.tether};
  }

  Path reconstruct(int leaf) const {
    Path path;
    for (int i = leaf; i >= 0; i = labels_[i].parent) {
      path.states.push_back(state_of(labels_[i]));
    }
    std::reverse(path.states.begin(), path.states.end());
    return path;
  }

 private:
  void expand(int idx) {
    const std::optional<Vec3> prev_action =
        labels_[idx].dir >= 0 ? std::optional<Vec3>(labels_[idx].action)
                              : std::nullopt;
    const PathState prev_state = state_of(labels_[idx]);
    for (std::size_t m = 0; m < moves26().size(); ++m) {
      const Move& mv = moves26()[m];
      const Cell next{labels_[idx].cell.x + mv.dx, labels_[idx].cell.y + mv.dy,
                      labels_[idx].cell.z + mv.dz};
      if (!world_.is_free(next)) continue;
      if (on_chain(idx, next)) continue;  // keep paths simple
      // Diagonal moves may clip an obstacle corner even when both cells are
      // free; the flight segment itself must be clear.
      if (!world_.line_of_sight(prev_state.position, world_.center(next))) {
        continue;
      }

      TetherState next_tether = labels_[idx].tether;
      try {
        next_tether = tether_step(next_tether, world_.center(next), world_);
      } catch (const TetherInfeasibleError&) {
        continue;
      }

      Label cand(next, std::move(next_tether));
      cand.dir = static_cast<int>(m);
      cand.action = world_.center(next) - prev_state.position;
      cand.risk = acc_.extend(labels_[idx].risk, prev_state, prev_action,
                              state_of(cand));
      cand.total = cand.risk.total(acc_.weights());
      cand.depth = labels_[idx].depth + 1;
      cand.parent = idx;
      if (config_.accumulate_reward) {
        cand.reward_collected =
            labels_[idx].reward_collected +
            std::pow(config_.reward_discount, cand.depth) * cell_reward_(next);
      }
      try_insert(std::move(cand));
    }
  }

  bool on_chain(int idx, const Cell& c) const {
    for (int i = idx; i >= 0; i = labels_[i].parent) {
      if (labels_[i].cell == c) return true;
    }
    return false;
  }

  // Visited-cell set of a label identified by (parent chain, own cell).
  std::vector<std::size_t> visited_of(int parent, const Cell& own) const {
    std::vector<std::size_t> v;
    v.push_back(world_.index(own));
    for (int i = parent; i >= 0; i = labels_[i].parent) {
      v.push_back(world_.index(labels_[i].cell));
    }
    std::sort(v.begin(), v.end());
    return v;
  }

  // True when `a` dominates `b`: element-wise no worse in every risk
  // element, no worse in collected reward (accumulate mode), and in strict
  // mode also blocking no cell that `b` leaves open.
  bool dominates(const RiskBreakdown& ra, double rew_a, int par_a,
                 const Cell& cell_a, const RiskBreakdown& rb, double rew_b,
                 int par_b, const Cell& cell_b) const {
    if (!rb.dominated_by(ra)) return false;
    if (config_.accumulate_reward && rew_a < rew_b) return false;
    if (config_.strict_dominance) {
      const auto va = visited_of(par_a, cell_a);
      const auto vb = visited_of(par_b, cell_b);
      if (!std::includes(vb.begin(), vb.end(), va.begin(), va.end())) {
        return false;
      }
    }
    return true;
  }

  void try_insert(Label&& cand) {
    LabelKey key{world_.index(cand.cell), cand.dir,
                 contact_signature(cand.tether, world_.cell_size())};
    auto& bucket = buckets_[std::move(key)];

    for (const int e : bucket) {
      const Label& ex = labels_[e];
      if (ex.dead) continue;
      if (dominates(ex.risk, ex.reward_collected, ex.parent, ex.cell,
                    cand.risk, cand.reward_collected, cand.parent,
                    cand.cell)) {
        return;
      }
    }
    for (const int e : bucket) {
      Label& ex = labels_[e];
      if (ex.dead) continue;
      if (dominates(cand.risk, cand.reward_collected, cand.parent, cand.cell,
                    ex.risk, ex.reward_collected, ex.parent, ex.cell)) {
        ex.dead = true;
      }
    }
    std::erase_if(bucket, [&](int e) { return labels_[e].dead; });
    bucket_insert(std::move(cand), &bucket);
  }

  void bucket_insert(Label&& l, std::vector<int>* bucket = nullptr) {
    if (labels_.size() >= config_.label_budget) {
      throw Error("planner label budget exhausted");
    }
    const int serial = static_cast<int>(labels_.size());
    const double total = l.total;
    labels_.push_back(std::move(l));
    if (bucket == nullptr) {
      const Label& stored = labels_.back();
      LabelKey key{world_.index(stored.cell), stored.dir,
                   contact_signature(stored.tether, world_.cell_size())};
      buckets_[std::move(key)].push_back(serial);
    } else {
      bucket->push_back(serial);
    }
    heap_.push({total, serial});
  }

  const GridWorld& world_;
  PlannerConfig config_;
  RiskAccumulator acc_;
  RewardFn cell_reward_;
  std::deque<Label> labels_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>,
                      std::greater<HeapEntry>>
      heap_;
  std::unordered_map<LabelKey, std::vector<int>, LabelKeyHash> buckets_;
};

// Terminal reward of a cell center; a degenerate viewpoint (cell center
// exactly on the point of interest) scores zero.
SearchEngine::RewardFn make_cell_reward(const GridWorld& world,
                                        const ViewpointQualityMap& map,
                                        const PlannerConfig& config) {
  auto cache = std::make_shared<std::unordered_map<std::size_t, double>>();
  return [&world, &map, config, cache](const Cell& c) {
    const auto it = cache->find(world.index(c));
    if (it != cache->end()) return it->second;
    double q = 0.0;
    try {
      q = effective_quality(world.center(c), map, world,
                            config.require_poi_los);
    } catch (const SingularityError&) {
      q = 0.0;
    }
    cache->emplace(world.index(c), q);
    return q;
  };
}

}  // namespace

PlanResult plan(const GridWorld& world, const ViewpointQualityMap& reward,
                const RiskWeights& weights, Cell start, const Vec3& anchor,
                const PlannerConfig& config) {
  auto cell_reward = make_cell_reward(world, reward, config);
  SearchEngine engine(world, weights, config, start, anchor, cell_reward);

  const double r0 = config.utility_regularizer;
  int best = -1;
  double best_utility = 0.0;
  double best_total = 0.0;
  Cell best_cell;
  double max_reward_seen = 0.0;
  engine.run(std::nullopt, [&](int idx) {
    const Label& l = engine.label(idx);
    const double q = cell_reward(l.cell);
    max_reward_seen = std::max(max_reward_seen, q);
    const double scored =
        config.accumulate_reward ? l.reward_collected : q;
    const double u = scored / (l.total + r0);
    if (best < 0 ||
        better_candidate(u, l.total, l.cell, best_utility, best_total,
                         best_cell)) {
      best = idx;
      best_utility = u;
      best_total = l.total;
      best_cell = l.cell;
    }
  });

  if (best < 0) throw Error("planner settled no labels");
  if (max_reward_seen == 0.0) best = 0;  // nothing worth moving for

  const Label& chosen = engine.label(best);
  PlanResult result;
  result.path = engine.reconstruct(best);
  result.breakdown = chosen.risk;
  result.total_risk = chosen.total;
  result.terminal_reward = config.accumulate_reward ? chosen.reward_collected
                                                    : cell_reward(chosen.cell);
  result.utility = result.terminal_reward / (result.total_risk + r0);
  return result;
}

Path min_risk_to(const GridWorld& world, const RiskWeights& weights,
                 Cell start, const Vec3& anchor, Cell goal,
                 const PlannerConfig& config) {
  if (!world.is_free(goal)) throw CollisionError("goal cell in collision");
  SearchEngine engine(world, weights, config, start, anchor,
                      [](const Cell&) { return 0.0; });
  int found = -1;
  engine.run(goal, [&](int idx) {
    if (engine.label(idx).cell == goal && found < 0) found = idx;
  });
  if (found < 0) throw Error("goal unreachable");
  return engine.reconstruct(found);
}

PlanResult brute_force_plan(const GridWorld& world,
                            const ViewpointQualityMap& reward,
                            const RiskWeights& weights, Cell start,
                            const Vec3& anchor, std::size_t max_states,
                            const PlannerConfig& config) {
  config.validate();
  if (world.free_count() > max_states) {
    throw ConfigError("world exceeds brute-force bound of " +
                      std::to_string(max_states) + " free cells");
  }
  if (!world.is_free(start)) {
    throw CollisionError("start cell in collision");
  }
  RiskAccumulator acc(world, weights);
  TetherState root(anchor, world.center(start));
  if (!tether_feasible(root, world)) {
    throw TetherInfeasibleError(
        "initial tether from anchor to start is blocked");
  }

  // Reward of every free cell; the max doubles as the pruning bound.
  auto cell_reward = make_cell_reward(world, reward, config);
  double max_reward = 0.0;
  for (int x = 0; x < world.dims().x; ++x) {
    for (int y = 0; y < world.dims().y; ++y) {
      for (int z = 0; z < world.dims().z; ++z) {
        const Cell c{x, y, z};
        if (world.is_free(c)) max_reward = std::max(max_reward, cell_reward(c));
      }
    }
  }

  const double r0 = config.utility_regularizer;
  std::vector<char> visited(
      static_cast<std::size_t>(world.dims().x) * world.dims().y *
          world.dims().z,
      0);
  Path current;
  PlanResult best;
  bool have_best = false;
  double best_utility = 0.0;

  const std::function<void(const RiskBreakdown&, const std::optional<Vec3>&,
                           double)>
      dfs = [&](const RiskBreakdown& risk, const std::optional<Vec3>& action,
                double reward_acc) {
        // Copy: the recursive push_back below may reallocate the vector.
        const PathState here = current.states.back();
        const double total = risk.total(weights);
        const double q = config.accumulate_reward
                             ? reward_acc
                             : cell_reward(here.cell);
        const double u = q / (total + r0);
        if (!have_best ||
            better_candidate(u, total, here.cell, best_utility,
                             best.total_risk, best.path.states.back().cell)) {
          have_best = true;
          best_utility = u;
          best.path = current;
          best.breakdown = risk;
          best.total_risk = total;
          best.terminal_reward = q;
          best.utility = u;
        }
        if (!config.accumulate_reward &&
            max_reward / (total + r0) < best_utility) {
          return;  // risk only grows and reward is bounded
        }
        for (const Move& mv : moves26()) {
          const Cell next{here.cell.x + mv.dx, here.cell.y + mv.dy,
                          here.cell.z + mv.dz};
          if (!world.is_free(next) || visited[world.index(next)]) continue;
          if (!world.line_of_sight(here.position, world.center(next))) {
            continue;
          }
          TetherState next_tether = here.tether;
          try {
            next_tether = tether_step(next_tether, world.center(next), world);
          } catch (const TetherInfeasibleError&) {
            continue;
          }
          PathState next_state{next, world.center(next),
                               std::move(next_tether)};
          const RiskBreakdown next_risk =
              acc.extend(risk, here, action, next_state);
          const Vec3 next_action = next_state.position - here.position;
          const double next_reward =
              config.accumulate_reward
                  ? reward_acc + std::pow(config.reward_discount,
                                          current.size()) *
                                     cell_reward(next)
                  : 0.0;
          visited[world.index(next)] = 1;
          current.states.push_back(std::move(next_state));
          dfs(next_risk, next_action, next_reward);
          current.states.pop_back();
          visited[world.index(next)] = 0;
        }
      };

  PathState s0{start, world.center(start), std::move(root)};
  const RiskBreakdown risk0 = acc.start(s0);
  const double reward0 =
      config.accumulate_reward ? cell_reward(start) : 0.0;
  visited[world.index(start)] = 1;
  current.states.push_back(std::move(s0));
  dfs(risk0, std::nullopt, reward0);

  if (!config.accumulate_reward && max_reward == 0.0) {
    // Nothing worth moving for: the zero-length path at the start.
    Path root_path;
    root_path.states.push_back(current.states.front());
    best.path = std::move(root_path);
    best.breakdown = risk0;
    best.total_risk = risk0.total(weights);
    best.terminal_reward = 0.0;
    best.utility = 0.0;
  }
  return best;
}

}  // namespace tetherplan
