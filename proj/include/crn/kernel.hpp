#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crn/error.hpp"
#include "crn/model.hpp"

namespace crn {

struct Transition {
  State target;
  double rate = 0.0;
};

// Ordered list of states; consecutive transitions must be active for path
// queries. Repetition allowed.
using Path = std::vector<State>;

namespace detail {
struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : s) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};
}  // namespace detail

enum class CachePolicy { none, memoize };

// The continuous-time Markov chain induced by mass-action kinetics:
// q_{z,w} sums the intensities of all reactions with net change w-z.
class TransitionKernel {
 public:
  explicit TransitionKernel(const ReactionSystem& sys,
                            CachePolicy cache = CachePolicy::none)
      : sys_(&sys), cache_(cache) {
    // Group reactions by net change so parallel reactions aggregate.
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < sys.reactions.size(); ++r)
      groups[sys.reactions[r].net_change()].push_back(r);
    for (auto& [delta, rxns] : groups) groups_.push_back({delta, rxns});
  }

  const ReactionSystem& system() const { return *sys_; }
  std::size_t dim() const { return sys_->dim(); }

  std::vector<Transition> out_transitions(const State& z) const {
    if (z.size() != sys_->dim())
      throw Error("dimension-mismatch",
                  "state has dimension " + std::to_string(z.size()) +
                      " but the network has " + std::to_string(sys_->dim()) +
                      " species");
    if (cache_ == CachePolicy::memoize) {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(z);
      if (it != memo_.end()) return it->second;
    }
    std::vector<Transition> out;
    for (const auto& [delta, rxns] : groups_) {
      double rate = 0.0;
      for (auto r : rxns) rate += evaluate_intensity(*sys_, r, z);
      if (rate <= 0.0) continue;
      State w = z;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += delta[i];
      out.push_back({std::move(w), rate});
    }
    if (cache_ == CachePolicy::memoize) {
      std::lock_guard<std::mutex> lock(mutex_);
      memo_.emplace(z, out);
    }
    return out;
  }

  double total_rate(const State& z) const {
    double q = 0.0;
    for (const auto& t : out_transitions(z)) q += t.rate;
    return q;
  }

  // Rate of the specific jump z -> w; zero if not a transition.
  double rate_between(const State& z, const State& w) const {
    for (const auto& t : out_transitions(z))
      if (t.target == w) return t.rate;
    return 0.0;
  }

 private:
  const ReactionSystem* sys_;
  CachePolicy cache_;
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::size_t>>>
      groups_;
  mutable std::unordered_map<State, std::vector<Transition>, detail::StateHash>
      memo_;
  mutable std::mutex mutex_;
};

inline bool path_is_active(const TransitionKernel& kernel, const Path& path) {
  for (std::size_t m = 0; m + 1 < path.size(); ++m)
    if (kernel.rate_between(path[m], path[m + 1]) <= 0.0) return false;
  return true;
}

// Conditioned moment generating function of the return time along an
// active path: prod_m q_{x(m),x(m+1)} / (q_{x(m)} - rho). At rho = 0 this
// is the path probability given the start state.
inline double path_mgf(const TransitionKernel& kernel, const Path& path,
                       double rho) {
  if (path.size() < 2)
    throw Error("inactive-path", "path needs at least two states");
  if (rho < 0.0)
    throw Error("rho-out-of-range", "rho must be nonnegative");
  double value = 1.0;
  for (std::size_t m = 0; m + 1 < path.size(); ++m) {
    double q = kernel.total_rate(path[m]);
    double edge = kernel.rate_between(path[m], path[m + 1]);
    if (edge <= 0.0)
      throw Error("inactive-path",
                  "inactive edge at index " + std::to_string(m));
    if (rho >= q)
      throw Error("rho-out-of-range",
                  "rho exceeds holding rate at index " + std::to_string(m));
    value *= edge / (q - rho);
  }
  return value;
}

// Axis-aligned box [0, bounds_i] per coordinate.
struct Box {
  std::vector<std::int64_t> bounds;

  bool contains(const State& s) const {
    if (s.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] < 0 || s[i] > bounds[i]) return false;
    return true;
  }
  std::size_t size() const {
    std::size_t n = 1;
    for (auto b : bounds) {
      std::size_t w = static_cast<std::size_t>(b) + 1;
      if (n > (std::size_t(1) << 62) / w)
        throw Error("box-too-large", "truncated state space too large");
      n *= w;
    }
    return n;
  }
  std::size_t index_of(const State& s) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      idx = idx * (static_cast<std::size_t>(bounds[i]) + 1) +
            static_cast<std::size_t>(s[i]);
    return idx;
  }
  State state_at(std::size_t idx) const {
    State s(bounds.size());
    for (std::size_t i = bounds.size(); i-- > 0;) {
      std::size_t w = static_cast<std::size_t>(bounds[i]) + 1;
      s[i] = static_cast<std::int64_t>(idx % w);
      idx /= w;
    }
    return s;
  }
};

// Shortest active path from `from` to `to` by BFS confined to the box;
// states in `avoid` are excluded as interior states. Expansion follows
// the kernel's deterministic transition order, so ties break the same
// way on every run.
inline std::optional<Path> reachable(const TransitionKernel& kernel,
                                     const State& from, const State& to,
                                     const Box& box,
                                     const std::vector<State>& avoid = {}) {
  if (!box.contains(from) || !box.contains(to)) return std::nullopt;
  if (from == to) return Path{from};
  std::unordered_map<State, State, detail::StateHash> parent;
  std::deque<State> queue;
  parent.emplace(from, from);
  queue.push_back(from);
  while (!queue.empty()) {
    State z = queue.front();
    queue.pop_front();
    for (const auto& t : kernel.out_transitions(z)) {
      if (!box.contains(t.target)) continue;
      if (parent.count(t.target)) continue;
      if (t.target != to &&
          std::find(avoid.begin(), avoid.end(), t.target) != avoid.end())
        continue;
      parent.emplace(t.target, z);
      if (t.target == to) {
        Path path{to};
        State cur = to;
        while (cur != from) {
          cur = parent.at(cur);
          path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(t.target);
    }
  }
  return std::nullopt;
}

}  // namespace crn
