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
#include <sstream>
#include <stdexcept>

#include "xddpipe/report.hpp"

namespace xddpipe {

std::string lp_name(const std::string& id) {
  std::string out;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

namespace {

std::string x_var(const Cfg& g, int b) { return "x_" + lp_name(g.blocks[static_cast<std::size_t>(b)].id); }

std::string e_var(const Cfg& g, int s, int d) {
  return "e_" + lp_name(g.blocks[static_cast<std::size_t>(s)].id) + "_" +
         lp_name(g.blocks[static_cast<std::size_t>(d)].id);
}

std::string sum(const std::vector<std::string>& terms) {
  std::string out;
  for (const std::string& t : terms) out += (out.empty() ? "" : " + ") + t;
  return out;
}

}  // namespace

std::string emit_ipet(const Cfg& cfg, const std::vector<ExtTime>& times) {
  if (times.size() != cfg.blocks.size()) throw std::invalid_argument("one time per block expected");
  for (std::size_t b = 0; b < times.size(); ++b)
    if (!times[b].is_finite())
      throw std::invalid_argument("block " + cfg.blocks[b].id + " has time " + to_string(times[b]));

  const int n = static_cast<int>(cfg.blocks.size());
  std::ostringstream os;
  os << "/* objective */\n";
  std::vector<std::string> obj;
  for (int b = 0; b < n; ++b) obj.push_back(std::to_string(times[static_cast<std::size_t>(b)].value()) + " " + x_var(cfg, b));
  os << "max: " << sum(obj) << ";\n\n";

  os << "/* flow */\n";
  os << x_var(cfg, cfg.entry) << " = 1;\n";
  os << x_var(cfg, cfg.exit) << " = 1;\n";
  for (int b = 0; b < n; ++b) {
    std::vector<std::string> in, out;
    for (const auto& [s, d] : cfg.edges) {
      if (d == b) in.push_back(e_var(cfg, s, d));
      if (s == b) out.push_back(e_var(cfg, s, d));
    }
    if (!in.empty()) os << x_var(cfg, b) << " = " << sum(in) << ";\n";
    if (!out.empty()) os << x_var(cfg, b) << " = " << sum(out) << ";\n";
  }

  if (!cfg.loop_bounds.empty()) {
    os << "\n/* loop bounds */\n";
    auto back = cfg.back_edges();
    for (const auto& [h, bound] : cfg.loop_bounds) {
      std::vector<std::string> entry;
      for (const auto& [s, d] : cfg.edges)
        if (d == h && std::find(back.begin(), back.end(), std::make_pair(s, d)) == back.end())
          entry.push_back(std::to_string(bound) + " " + e_var(cfg, s, d));
      os << x_var(cfg, h) << " <= " << sum(entry) << ";\n";
    }
  }

  os << "\n/* integers */\n";
  std::vector<std::string> vars;
  for (int b = 0; b < n; ++b) vars.push_back(x_var(cfg, b));
  for (const auto& [s, d] : cfg.edges) vars.push_back(e_var(cfg, s, d));
  os << "int ";
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << vars[i];
  os << ";\n";
  return os.str();
}

std::optional<std::int64_t> longest_path(const Cfg& cfg, const std::vector<ExtTime>& times) {
  if (!cfg.back_edges().empty()) return std::nullopt;
  const std::size_t n = cfg.blocks.size();
  // Kahn order; the graph is acyclic here.
  std::vector<int> indeg(n, 0);
  for (const auto& e : cfg.edges) ++indeg[static_cast<std::size_t>(e.second)];
  std::vector<int> order;
  for (std::size_t b = 0; b < n; ++b)
    if (indeg[b] == 0) order.push_back(static_cast<int>(b));
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int d : cfg.successors(order[k]))
      if (--indeg[static_cast<std::size_t>(d)] == 0) order.push_back(d);

  std::vector<std::optional<std::int64_t>> best(n);
  best[static_cast<std::size_t>(cfg.entry)] = times[static_cast<std::size_t>(cfg.entry)].value();
  for (int b : order) {
    const auto& cur = best[static_cast<std::size_t>(b)];
    if (!cur) continue;
    for (int d : cfg.successors(b)) {
      std::int64_t v = *cur + times[static_cast<std::size_t>(d)].value();
      auto& slot = best[static_cast<std::size_t>(d)];
      if (!slot || v > *slot) slot = v;
    }
  }
  return best[static_cast<std::size_t>(cfg.exit)];
}

}  // namespace xddpipe
