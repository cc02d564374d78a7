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

#include "xddpipe/crosscheck.hpp"

#include <sstream>
#include <tuple>

#include "xddpipe/errors.hpp"

namespace xddpipe {

PathReplay::PathReplay(const Analyzer& an, const AnalysisResult& res, const std::vector<int>& path) {
  const Cfg& cfg = an.cfg();
  std::map<std::tuple<int, int, AccessKind>, std::size_t> inventory;
  {
    auto inv = event_inventory(cfg);
    for (std::size_t i = 0; i < inv.size(); ++i) inventory[{inv[i].block, inv[i].instr, inv[i].kind}] = i;
  }
  std::map<EventId, std::size_t> live;
  std::size_t next = 0;
  StateVector s = an.initial_state();
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int b = path[k];
    if (k > 0) {
      const int prev = path[k - 1];
      s = an.along_edge(prev, b, s);
      if (an.is_back_edge(prev, b)) {
        std::map<EventId, std::size_t> moved;
        for (const auto& [e, a] : live)
          moved[an.in_loop(b, e.base) ? EventId{e.base, e.generation + 1} : e] = a;
        live = std::move(moved);
      }
    }
    if (!res.blocks.at(static_cast<std::size_t>(b)).in.contains(s)) covered_ = false;
    const BasicBlock& blk = cfg.blocks[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < blk.instructions.size(); ++i)
      for (AccessKind kind : {AccessKind::kFetch, AccessKind::kData}) {
        auto it = inventory.find({b, static_cast<int>(i), kind});
        if (it != inventory.end()) live[an.events().id(static_cast<std::uint32_t>(it->second))] = next++;
      }
    Analyzer::Transfer t = an.transfer(b, s);
    times_.push_back(t.time);
    events_.push_back(live);
    s = t.out;
  }
}

std::int64_t PathReplay::total(const std::vector<bool>& miss) const {
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    Configuration g;
    for (EventId e : support(times_[k])) {
      auto it = events_[k].find(e);
      if (it == events_[k].end()) throw InvariantViolation("time mentions an event outside the path");
      g.set(e, miss.at(it->second));
    }
    ExtTime v = eval(times_[k], g);
    if (!v.is_finite()) throw InvariantViolation("infinite block time on a path");
    sum += v.value();
  }
  return sum;
}

CrossCheck cross_check(const Analyzer& an, const AnalysisResult& res, std::size_t guard) {
  CrossCheck out;
  std::vector<oracle::Enumerated> all = oracle::enumerate(an.cfg(), an.model().spec(), guard);
  std::map<std::vector<int>, PathReplay> replays;
  for (const oracle::Enumerated& e : all) {
    auto it = replays.find(e.path);
    if (it == replays.end()) {
      it = replays.emplace(e.path, PathReplay(an, res, e.path)).first;
      out.covered = out.covered && it->second.covered();
    }
    ++out.pairs;
    const std::int64_t got = it->second.total(e.miss);
    if (got != e.total) {
      if (out.mismatches++ == 0) {
        std::ostringstream os;
        os << "path";
        for (int b : e.path) os << " " << an.cfg().blocks[static_cast<std::size_t>(b)].id;
        os << " misses";
        for (bool m : e.miss) os << " " << m;
        os << ": analysis " << got << ", oracle " << e.total;
        out.first_mismatch = os.str();
      }
    }
  }
  return out;
}

}  // namespace xddpipe
