#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tmpn/errors.hpp"

namespace tmpn {

// Bounded breadth-first unfolding of a step relation. Nodes are deduplicated
// by a caller-supplied canonical key, so states reached twice at the same
// depth collapse; the first-discovered parent edge is kept for replay paths.
template <class State, class Choice>
struct trace_graph {
  struct edge {
    std::size_t from;
    Choice choice;
    std::size_t to;
  };

  std::vector<State> states;
  std::vector<int> depth;  // per node; root has depth 0
  std::vector<std::optional<std::pair<std::size_t, Choice>>> parent;
  std::vector<edge> edges;
  std::vector<std::vector<std::size_t>> layers;  // node ids per depth

  std::size_t size() const { return states.size(); }

  // choices from the root to node id, in firing order
  std::vector<Choice> path_to(std::size_t id) const {
    std::vector<Choice> path;
    while (parent[id]) {
      path.push_back(parent[id]->second);
      id = parent[id]->first;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
};

// succ(state) must return the successor list in a deterministic canonical
// order as (choice, next state) pairs; key(state) must be injective on
// states. Throws budget_exceeded once more than `budget` nodes exist.
template <class State, class Choice, class Succ, class Key>
trace_graph<State, Choice> explore(const State& init, int max_depth, std::size_t budget,
                                   Succ&& succ, Key&& key) {
  trace_graph<State, Choice> g;
  std::unordered_map<std::string, std::size_t> index;

  auto intern = [&](const State& s, int d,
                    std::optional<std::pair<std::size_t, Choice>> via) -> std::size_t {
    std::string k = key(s);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    if (g.states.size() >= budget)
      throw budget_exceeded("state budget exceeded (" + std::to_string(budget) + " nodes)");
    std::size_t id = g.states.size();
    g.states.push_back(s);
    g.depth.push_back(d);
    g.parent.push_back(std::move(via));
    if (g.layers.size() <= static_cast<std::size_t>(d)) g.layers.resize(d + 1);
    g.layers[d].push_back(id);
    index.emplace(std::move(k), id);
    return id;
  };

  intern(init, 0, std::nullopt);
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (g.depth[i] >= max_depth) continue;
    // copy: g.states may reallocate while successors are interned
    State cur = g.states[i];
    for (auto& [choice, next] : succ(cur)) {
      std::size_t to = intern(next, g.depth[i] + 1, std::make_pair(i, choice));
      g.edges.push_back({i, std::move(choice), to});
    }
  }
  return g;
}

}  // namespace tmpn
