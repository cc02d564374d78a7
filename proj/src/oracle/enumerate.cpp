// Copyright 2026 The xddpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "xddpipe/oracle.hpp"

namespace xddpipe::oracle {

namespace {

struct Walker {
  const Cfg& cfg;
  std::size_t max_paths;
  std::set<std::pair<int, int>> back;
  std::map<int, std::set<int>> body;  // header -> blocks
  std::vector<std::vector<int>> out;

  void walk(int b, std::map<int, int> count, std::vector<int>& path) {
    if (b == cfg.exit) {
      if (out.size() >= max_paths) throw std::length_error("too many paths");
      out.push_back(path);
      return;
    }
    for (int d : cfg.successors(b)) {
      std::map<int, int> c = count;
      if (back.count({b, d})) {
        if (c[d] >= cfg.loop_bounds.at(d)) continue;
        ++c[d];
      } else {
        bool ok = true;
        for (auto it = c.begin(); it != c.end();) {
          const auto& blocks = body.at(it->first);
          if (blocks.count(b) && !blocks.count(d)) {
            if (it->second != cfg.loop_bounds.at(it->first)) ok = false;
            it = c.erase(it);
          } else {
            ++it;
          }
        }
        if (!ok) continue;
        if (body.count(d)) c[d] = 1;
      }
      path.push_back(d);
      walk(d, std::move(c), path);
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<std::vector<int>> complete_paths(const Cfg& cfg, std::size_t max_paths) {
  Walker w{cfg, max_paths, {}, {}, {}};
  for (const auto& e : cfg.back_edges()) {
    w.back.insert(e);
    for (int b : cfg.natural_loop(e.second)) w.body[e.second].insert(b);
  }
  std::map<int, int> count;
  if (w.body.count(cfg.entry)) count[cfg.entry] = 1;
  std::vector<int> path{cfg.entry};
  w.walk(cfg.entry, count, path);
  return w.out;
}

std::vector<Enumerated> enumerate(const Cfg& cfg, const PipelineSpec& p, std::size_t guard) {
  std::vector<std::vector<int>> paths = complete_paths(cfg, guard);
  std::vector<PathGraph> graphs;
  std::size_t pairs = 0;
  for (const auto& path : paths) {
    graphs.emplace_back(cfg, p, path);
    const std::size_t n = graphs.back().accesses().size();
    if (n >= 63 || (pairs += std::size_t{1} << n) > guard)
      throw std::length_error("more than " + std::to_string(guard) + " path x configuration pairs");
  }
  std::vector<Enumerated> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::size_t n = graphs[i].accesses().size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<bool> miss(n);
      for (std::size_t a = 0; a < n; ++a) miss[a] = (mask >> a) & 1U;
      out.push_back({paths[i], miss, graphs[i].total(miss)});
    }
  }
  return out;
}

}  // namespace xddpipe::oracle
