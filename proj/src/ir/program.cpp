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

#include "xddpipe/program.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "json_reader.hpp"
#include "xddpipe/errors.hpp"

namespace xddpipe {

using detail::at;
using detail::Json;
using detail::ObjectReader;

int Cfg::block_index(const std::string& id) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<int> Cfg::successors(int b) const {
  std::vector<int> out;
  for (auto [s, d] : edges)
    if (s == b) out.push_back(d);
  return out;
}

std::vector<int> Cfg::predecessors(int b) const {
  std::vector<int> out;
  for (auto [s, d] : edges)
    if (d == b) out.push_back(s);
  return out;
}

namespace {

std::vector<int> reverse_postorder(const Cfg& g) {
  std::vector<int> order;
  std::vector<char> seen(g.blocks.size(), 0);
  std::function<void(int)> dfs = [&](int b) {
    seen[static_cast<std::size_t>(b)] = 1;
    for (int s : g.successors(b))
      if (!seen[static_cast<std::size_t>(s)]) dfs(s);
    order.push_back(b);
  };
  dfs(g.entry);
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

std::vector<int> Cfg::immediate_dominators() const {
  auto rpo = reverse_postorder(*this);
  std::vector<int> pos(blocks.size(), -1);
  for (std::size_t i = 0; i < rpo.size(); ++i) pos[static_cast<std::size_t>(rpo[i])] = static_cast<int>(i);
  std::vector<int> idom(blocks.size(), -1);
  idom[static_cast<std::size_t>(entry)] = entry;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (pos[static_cast<std::size_t>(a)] > pos[static_cast<std::size_t>(b)]) a = idom[static_cast<std::size_t>(a)];
      while (pos[static_cast<std::size_t>(b)] > pos[static_cast<std::size_t>(a)]) b = idom[static_cast<std::size_t>(b)];
    }
    return a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int b : rpo) {
      if (b == entry) continue;
      int nd = -1;
      for (int p : predecessors(b)) {
        if (idom[static_cast<std::size_t>(p)] < 0) continue;
        nd = nd < 0 ? p : intersect(p, nd);
      }
      if (nd != idom[static_cast<std::size_t>(b)]) {
        idom[static_cast<std::size_t>(b)] = nd;
        changed = true;
      }
    }
  }
  return idom;
}

bool Cfg::dominates(int a, int b) const {
  auto idom = immediate_dominators();
  if (idom[static_cast<std::size_t>(b)] < 0) return false;
  for (int x = b;; x = idom[static_cast<std::size_t>(x)]) {
    if (x == a) return true;
    if (x == entry) return false;
  }
}

std::vector<std::pair<int, int>> Cfg::back_edges() const {
  auto idom = immediate_dominators();
  auto dom = [&](int a, int b) {
    if (idom[static_cast<std::size_t>(b)] < 0) return false;
    for (int x = b;; x = idom[static_cast<std::size_t>(x)]) {
      if (x == a) return true;
      if (x == entry) return false;
    }
  };
  std::vector<std::pair<int, int>> out;
  for (auto e : edges)
    if (dom(e.second, e.first)) out.push_back(e);
  return out;
}

std::vector<int> Cfg::natural_loop(int header) const {
  std::set<int> body{header};
  std::vector<int> work;
  for (auto [u, h] : back_edges())
    if (h == header && body.insert(u).second) work.push_back(u);
  while (!work.empty()) {
    int b = work.back();
    work.pop_back();
    for (int p : predecessors(b))
      if (body.insert(p).second) work.push_back(p);
  }
  return {body.begin(), body.end()};
}

std::vector<int> Cfg::enclosing_loops(int b) const {
  std::vector<std::pair<std::size_t, int>> found;
  for (const auto& [h, bound] : loop_bounds) {
    auto body = natural_loop(h);
    if (std::binary_search(body.begin(), body.end(), b)) found.push_back({body.size(), h});
  }
  std::sort(found.begin(), found.end(), [](auto x, auto y) { return x.first > y.first; });
  std::vector<int> out;
  for (auto [sz, h] : found) out.push_back(h);
  return out;
}

void validate(const Cfg& g) {
  const int n = static_cast<int>(g.blocks.size());
  if (n == 0) throw ValidationError("blocks", "program has no blocks");
  for (int b = 0; b < n; ++b) {
    const BasicBlock& bb = g.blocks[static_cast<std::size_t>(b)];
    if (bb.instructions.empty() && !bb.synthetic)
      throw ValidationError(at("blocks", static_cast<std::size_t>(b)), "empty block " + bb.id);
  }
  if (!g.predecessors(g.entry).empty())
    throw ValidationError("entry", "entry block has predecessors");
  if (!g.successors(g.exit).empty()) throw ValidationError("exit", "exit block has successors");

  std::vector<char> fwd(static_cast<std::size_t>(n), 0), bwd(static_cast<std::size_t>(n), 0);
  std::function<void(int)> reach = [&](int b) {
    fwd[static_cast<std::size_t>(b)] = 1;
    for (int s : g.successors(b))
      if (!fwd[static_cast<std::size_t>(s)]) reach(s);
  };
  std::function<void(int)> coreach = [&](int b) {
    bwd[static_cast<std::size_t>(b)] = 1;
    for (int p : g.predecessors(b))
      if (!bwd[static_cast<std::size_t>(p)]) coreach(p);
  };
  reach(g.entry);
  coreach(g.exit);
  for (int b = 0; b < n; ++b) {
    std::string where = at("blocks", static_cast<std::size_t>(b));
    if (!fwd[static_cast<std::size_t>(b)])
      throw ValidationError(where, "unreachable block " + g.blocks[static_cast<std::size_t>(b)].id);
    if (!bwd[static_cast<std::size_t>(b)])
      throw ValidationError(where, "block " + g.blocks[static_cast<std::size_t>(b)].id + " does not reach the exit");
  }

  auto back = g.back_edges();
  std::set<int> headers;
  for (auto [u, h] : back) {
    headers.insert(h);
    if (!g.loop_bounds.count(h))
      throw ValidationError("loops", "unbounded cycle through " + g.blocks[static_cast<std::size_t>(h)].id);
  }
  for (const auto& [h, bound] : g.loop_bounds) {
    if (!headers.count(h))
      throw ValidationError("loops", "block " + g.blocks[static_cast<std::size_t>(h)].id + " is not a loop header");
    if (bound < 1) throw ValidationError("loops", "bound must be >= 1");
  }
  // Every remaining cycle would be irreducible.
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> fwd_edges;
  for (auto e : g.edges)
    if (std::find(back.begin(), back.end(), e) == back.end()) {
      fwd_edges.push_back(e);
      ++indeg[static_cast<std::size_t>(e.second)];
    }
  std::vector<int> ready;
  for (int b = 0; b < n; ++b)
    if (!indeg[static_cast<std::size_t>(b)]) ready.push_back(b);
  int seen = 0;
  while (!ready.empty()) {
    int b = ready.back();
    ready.pop_back();
    ++seen;
    for (auto [s, d] : fwd_edges)
      if (s == b && --indeg[static_cast<std::size_t>(d)] == 0) ready.push_back(d);
  }
  if (seen != n) throw ValidationError("edges", "unbounded cycle (irreducible control flow)");
}

void validate_against(const Cfg& g, const PipelineSpec& p) {
  for (std::size_t b = 0; b < g.blocks.size(); ++b)
    for (std::size_t i = 0; i < g.blocks[b].instructions.size(); ++i) {
      const auto& ins = g.blocks[b].instructions[i];
      std::string where = at(at(at("blocks", b), "instructions"), i);
      for (int r : ins.reads)
        if (r >= p.register_count) throw ValidationError(at(where, "reads"), "register out of range");
      for (int r : ins.writes)
        if (r >= p.register_count) throw ValidationError(at(where, "writes"), "register out of range");
    }
}

std::vector<EventAccess> event_inventory(const Cfg& g) {
  std::vector<EventAccess> out;
  for (std::size_t b = 0; b < g.blocks.size(); ++b)
    for (std::size_t i = 0; i < g.blocks[b].instructions.size(); ++i) {
      const auto& ins = g.blocks[b].instructions[i];
      std::string suffix = g.blocks[b].id + "_" + std::to_string(i);
      if (ins.fetch == Access::kNotClassified)
        out.push_back({"IC_" + suffix, static_cast<int>(b), static_cast<int>(i), AccessKind::kFetch});
      if (ins.data == Access::kNotClassified)
        out.push_back({"DC_" + suffix, static_cast<int>(b), static_cast<int>(i), AccessKind::kData});
    }
  return out;
}

namespace {

bool valid_id(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<int> read_regs(const ObjectReader& r, const char* key) {
  std::vector<int> out;
  if (!r.has(key)) return out;
  const Json& a = r.array(key);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number_integer() || a[i].get<long long>() < 0 || a[i].get<long long>() > 4095)
      throw ValidationError(at(r.path(key), i), "expected a register number");
    out.push_back(a[i].get<int>());
  }
  return out;
}

Access read_access(const ObjectReader& r, const char* key) {
  auto a = parse_access(r.string(key));
  if (!a) throw ValidationError(r.path(key), "expected AH, AM or NC");
  return *a;
}

InstructionDescriptor read_instruction(const Json& j, const std::string& where) {
  ObjectReader r(j, where, {"id", "class", "reads", "writes", "fetch", "data"});
  InstructionDescriptor ins;
  ins.id = r.string("id");
  if (!valid_id(ins.id)) throw ValidationError(r.path("id"), "ids are [A-Za-z0-9_]+");
  auto c = parse_instr_class(r.string("class"));
  if (!c) throw ValidationError(r.path("class"), "unknown instruction class");
  ins.cls = *c;
  ins.reads = read_regs(r, "reads");
  ins.writes = read_regs(r, "writes");
  ins.fetch = read_access(r, "fetch");
  if (is_memory(ins.cls)) {
    if (!r.has("data")) throw ValidationError(r.path("data"), "loads and stores need a data classification");
    ins.data = read_access(r, "data");
  } else if (r.has("data")) {
    throw ValidationError(r.path("data"), "only loads and stores have a data classification");
  }
  return ins;
}

int block_ref(const Cfg& g, const Json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where, "expected a block id");
  int b = g.block_index(v.get<std::string>());
  if (b < 0) throw ValidationError(where, "dangling reference to block " + v.get<std::string>());
  return b;
}

void insert_block_front(Cfg& g, BasicBlock bb) {
  g.blocks.insert(g.blocks.begin(), std::move(bb));
  for (auto& [s, d] : g.edges) ++s, ++d;
  ++g.entry;
  ++g.exit;
  std::map<int, int> shifted;
  for (auto [h, b] : g.loop_bounds) shifted[h + 1] = b;
  g.loop_bounds = std::move(shifted);
}

}  // namespace

Cfg parse_program(const std::string& json_text) {
  Json j = detail::parse_json(json_text);
  ObjectReader r(j, "", {"version", "blocks", "edges", "entry", "exit", "loops"});
  if (r.integer("version") != 1) throw ValidationError("version", "unsupported version");
  Cfg g;
  const Json& blocks = r.array("blocks");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::string where = at("blocks", b);
    ObjectReader br(blocks[b], where, {"id", "instructions", "synthetic"});
    BasicBlock bb;
    bb.id = br.string("id");
    if (!valid_id(bb.id)) throw ValidationError(br.path("id"), "ids are [A-Za-z0-9_]+");
    if (g.block_index(bb.id) >= 0) throw ValidationError(br.path("id"), "duplicate block id " + bb.id);
    bb.synthetic = br.boolean_or("synthetic", false);
    const Json& ins = br.array("instructions");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      bb.instructions.push_back(read_instruction(ins[i], at(br.path("instructions"), i)));
      if (!ids.insert(bb.instructions.back().id).second)
        throw ValidationError(at(at(br.path("instructions"), i), "id"), "duplicate instruction id");
    }
    if (bb.instructions.empty() && !bb.synthetic)
      throw ValidationError(br.path("instructions"), "empty block " + bb.id);
    g.blocks.push_back(std::move(bb));
  }
  if (g.blocks.empty()) throw ValidationError("blocks", "program has no blocks");

  if (r.has("edges")) {
    const Json& es = r.array("edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string where = at("edges", i);
      if (!es[i].is_array() || es[i].size() != 2) throw ValidationError(where, "expected [src, dst]");
      std::pair<int, int> e{block_ref(g, es[i][0], at(where, 0)), block_ref(g, es[i][1], at(where, 1))};
      if (std::find(g.edges.begin(), g.edges.end(), e) != g.edges.end())
        throw ValidationError(where, "duplicate edge");
      g.edges.push_back(e);
    }
  }
  bool explicit_exit = r.has("exit");
  g.entry = r.has("entry") ? block_ref(g, r.get("entry"), "entry") : 0;
  if (explicit_exit) g.exit = block_ref(g, r.get("exit"), "exit");

  if (r.has("loops")) {
    const Json& ls = r.array("loops");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      ObjectReader lr(ls[i], at("loops", i), {"header", "bound"});
      int h = block_ref(g, lr.get("header"), lr.path("header"));
      long long bound = lr.integer("bound");
      if (bound < 1 || bound > 1000000) throw ValidationError(lr.path("bound"), "bound must be in [1, 1e6]");
      if (g.loop_bounds.count(h)) throw ValidationError(lr.path("header"), "duplicate loop bound");
      g.loop_bounds[h] = static_cast<int>(bound);
    }
  }

  if (!g.predecessors(g.entry).empty()) {
    if (g.block_index("alpha") >= 0) throw ValidationError("entry", "entry needs a synthetic alpha but the id is taken");
    int old_entry = g.entry;
    insert_block_front(g, BasicBlock{"alpha", {}, true});
    g.edges.insert(g.edges.begin(), {0, old_entry + 1});
    g.entry = 0;
  }
  std::vector<int> sinks;
  for (int b = 0; b < static_cast<int>(g.blocks.size()); ++b)
    if (g.successors(b).empty()) sinks.push_back(b);
  std::vector<int> to_omega;
  if (explicit_exit) {
    if (!g.successors(g.exit).empty()) to_omega.push_back(g.exit);
  } else if (sinks.size() == 1) {
    g.exit = sinks[0];
  } else if (sinks.empty()) {
    throw ValidationError("edges", "program has no exit block");
  } else {
    to_omega = sinks;
  }
  if (!to_omega.empty()) {
    if (g.block_index("omega") >= 0) throw ValidationError("exit", "exit needs a synthetic omega but the id is taken");
    g.blocks.push_back(BasicBlock{"omega", {}, true});
    int w = static_cast<int>(g.blocks.size()) - 1;
    for (int s : to_omega) g.edges.push_back({s, w});
    g.exit = w;
  }

  std::uint32_t next_event = 0;
  for (auto& bb : g.blocks)
    for (auto& ins : bb.instructions) {
      if (ins.fetch == Access::kNotClassified) ins.fetch_event = next_event++;
      if (ins.data == Access::kNotClassified) ins.data_event = next_event++;
    }
  validate(g);
  return g;
}

std::string print_program(const Cfg& g) {
  Json j;
  j["version"] = 1;
  j["blocks"] = Json::array();
  for (const auto& bb : g.blocks) {
    Json b;
    b["id"] = bb.id;
    if (bb.synthetic) b["synthetic"] = true;
    b["instructions"] = Json::array();
    for (const auto& ins : bb.instructions) {
      Json i;
      i["id"] = ins.id;
      i["class"] = to_string(ins.cls);
      i["reads"] = ins.reads;
      i["writes"] = ins.writes;
      i["fetch"] = to_string(ins.fetch);
      if (ins.data) i["data"] = to_string(*ins.data);
      b["instructions"].push_back(i);
    }
    j["blocks"].push_back(b);
  }
  j["edges"] = Json::array();
  for (auto [s, d] : g.edges)
    j["edges"].push_back({g.blocks[static_cast<std::size_t>(s)].id, g.blocks[static_cast<std::size_t>(d)].id});
  j["entry"] = g.blocks[static_cast<std::size_t>(g.entry)].id;
  j["exit"] = g.blocks[static_cast<std::size_t>(g.exit)].id;
  j["loops"] = Json::array();
  for (auto [h, bound] : g.loop_bounds)
    j["loops"].push_back({{"header", g.blocks[static_cast<std::size_t>(h)].id}, {"bound", bound}});
  return j.dump(2) + "\n";
}

}  // namespace xddpipe
