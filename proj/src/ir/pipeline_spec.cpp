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

#include "xddpipe/pipeline_spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json_reader.hpp"
#include "xddpipe/errors.hpp"

namespace xddpipe {

using detail::at;
using detail::Json;
using detail::ObjectReader;

int PipelineSpec::stage_index(const std::string& n) const {
  for (std::size_t i = 0; i < stages.size(); ++i)
    if (stages[i].name == n) return static_cast<int>(i);
  return -1;
}

int PipelineSpec::queue_after(int k) const {
  for (const auto& q : queues)
    if (q.after == stages[static_cast<std::size_t>(k)].name) return q.capacity;
  return 0;
}

std::vector<int> PipelineSpec::units_of(int k) const {
  std::vector<int> out;
  for (std::size_t u = 0; u < functional_units.size(); ++u)
    if (functional_units[u].stage == stages[static_cast<std::size_t>(k)].name)
      out.push_back(static_cast<int>(u));
  return out;
}

int PipelineSpec::unit_for(int k, InstrClass c) const {
  for (int u : units_of(k))
    if (functional_units[static_cast<std::size_t>(u)].latency.count(c)) return u;
  return -1;
}

int PipelineSpec::latency(int k, InstrClass c) const {
  int u = unit_for(k, c);
  if (u >= 0) return functional_units[static_cast<std::size_t>(u)].latency.at(c);
  const StageSpec& s = stages[static_cast<std::size_t>(k)];
  auto it = s.class_latency.find(c);
  return it == s.class_latency.end() ? s.latency : it->second;
}

int PipelineSpec::read_stage_for(InstrClass c) const {
  return stage_index(is_memory(c) ? read_stage_memory : read_stage);
}

int PipelineSpec::write_stage_for(InstrClass c) const {
  return stage_index(c == InstrClass::kLoad ? write_stage_load : write_stage);
}

void validate(const PipelineSpec& p) {
  if (p.version != 1) throw ValidationError("version", "unsupported version");
  if (p.stages.empty()) throw ValidationError("stages", "at least one stage required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < p.stages.size(); ++i) {
    const StageSpec& s = p.stages[i];
    std::string where = at("stages", i);
    if (s.name.empty() || !names.insert(s.name).second)
      throw ValidationError(at(where, "name"), "stage names must be unique and non-empty");
    if (s.width < 1) throw ValidationError(at(where, "width"), "width must be >= 1");
    if (s.latency < 1) throw ValidationError(at(where, "latency"), "latency must be >= 1");
    for (const auto& [c, l] : s.class_latency)
      if (l < 1) throw ValidationError(at(where, "class_latency"), "latency must be >= 1");
  }
  std::set<std::string> queued;
  for (std::size_t i = 0; i < p.queues.size(); ++i) {
    const QueueSpec& q = p.queues[i];
    std::string where = at("queues", i);
    int k = p.stage_index(q.after);
    if (k < 0) throw ValidationError(at(where, "after"), "unknown stage " + q.after);
    if (k + 1 == static_cast<int>(p.stages.size()))
      throw ValidationError(at(where, "after"), "no queue can follow the last stage");
    if (!queued.insert(q.after).second)
      throw ValidationError(at(where, "after"), "duplicate queue after " + q.after);
    if (q.capacity < 1) throw ValidationError(at(where, "capacity"), "capacity must be >= 1");
  }
  std::set<std::string> fu_names;
  for (std::size_t i = 0; i < p.functional_units.size(); ++i) {
    const FunctionalUnitSpec& u = p.functional_units[i];
    std::string where = at("functional_units", i);
    if (u.name.empty() || !fu_names.insert(u.name).second)
      throw ValidationError(at(where, "name"), "unit names must be unique and non-empty");
    if (p.stage_index(u.stage) < 0)
      throw ValidationError(at(where, "stage"), "unknown stage " + u.stage);
    if (u.count < 1) throw ValidationError(at(where, "count"), "count must be >= 1");
    for (const auto& [c, l] : u.latency)
      if (l < 1) throw ValidationError(at(where, "latency"), "latency must be >= 1");
  }
  for (int k = 0; k < static_cast<int>(p.stages.size()); ++k) {
    auto units = p.units_of(k);
    if (units.empty()) continue;
    for (int ci = 0; ci < kInstrClassCount; ++ci) {
      auto c = static_cast<InstrClass>(ci);
      int owners = 0;
      for (int u : units) owners += p.functional_units[static_cast<std::size_t>(u)].latency.count(c);
      if (owners != 1)
        throw ValidationError("functional_units",
                              std::string("class ") + to_string(c) + " must map to exactly one unit at " +
                                  p.stages[static_cast<std::size_t>(k)].name);
    }
  }
  auto need_stage = [&](const std::string& field, const std::string& v) {
    if (p.stage_index(v) < 0) throw ValidationError(field, "unknown stage " + v);
  };
  need_stage("fetch_stage", p.fetch_stage);
  need_stage("memory_stage", p.memory_stage);
  need_stage("read_stage", p.read_stage);
  need_stage("read_stage_memory", p.read_stage_memory);
  need_stage("write_stage", p.write_stage);
  need_stage("write_stage_load", p.write_stage_load);
  if (p.stage_index(p.memory_stage) <= p.stage_index(p.fetch_stage))
    throw ValidationError("memory_stage", "must come after the fetch stage");
  if (p.fetch_block_size < 1) throw ValidationError("fetch_block_size", "must be >= 1");
  if (p.bus_latency < 1) throw ValidationError("bus_latency", "must be >= 1");
  if (p.miss_latency < 1) throw ValidationError("miss_latency", "must be >= 1");
  if (p.register_count < 0 || p.register_count > 4096)
    throw ValidationError("register_count", "must be in [0, 4096]");
  if (p.contention_window && *p.contention_window < 0)
    throw ValidationError("contention_window", "must be >= 0");
}

namespace {

std::map<InstrClass, int> read_class_map(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where, "expected an object");
  std::map<InstrClass, int> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto c = parse_instr_class(it.key());
    if (!c) throw ValidationError(at(where, it.key()), "unknown instruction class");
    if (!it.value().is_number_integer()) throw ValidationError(at(where, it.key()), "expected an integer");
    out[*c] = it.value().get<int>();
  }
  return out;
}

Json write_class_map(const std::map<InstrClass, int>& m) {
  Json j = Json::object();
  for (const auto& [c, l] : m) j[to_string(c)] = l;
  return j;
}

int to_int(long long v, const std::string& where) {
  if (v < -(1LL << 31) || v >= (1LL << 31)) throw ValidationError(where, "integer out of range");
  return static_cast<int>(v);
}

}  // namespace

PipelineSpec parse_pipeline(const std::string& json_text) {
  Json j = detail::parse_json(json_text);
  ObjectReader r(j, "",
                 {"version", "name", "stages", "queues", "functional_units", "fetch_stage",
                  "memory_stage", "read_stage", "read_stage_memory", "write_stage",
                  "write_stage_load", "fetch_block_size", "bus_latency", "miss_latency",
                  "register_count", "contention_window"});
  PipelineSpec p;
  p.version = to_int(r.integer("version"), "version");
  p.name = r.string("name");
  const Json& stages = r.array("stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    std::string where = at("stages", i);
    ObjectReader s(stages[i], where, {"name", "width", "latency", "class_latency"});
    StageSpec st;
    st.name = s.string("name");
    st.width = to_int(s.integer("width"), s.path("width"));
    st.latency = to_int(s.integer("latency"), s.path("latency"));
    if (s.has("class_latency")) st.class_latency = read_class_map(s.get("class_latency"), s.path("class_latency"));
    p.stages.push_back(std::move(st));
  }
  if (r.has("queues")) {
    const Json& qs = r.array("queues");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      ObjectReader q(qs[i], at("queues", i), {"after", "capacity"});
      p.queues.push_back({q.string("after"), to_int(q.integer("capacity"), q.path("capacity"))});
    }
  }
  if (r.has("functional_units")) {
    const Json& us = r.array("functional_units");
    for (std::size_t i = 0; i < us.size(); ++i) {
      ObjectReader u(us[i], at("functional_units", i), {"name", "stage", "count", "latency"});
      FunctionalUnitSpec fu;
      fu.name = u.string("name");
      fu.stage = u.string("stage");
      fu.count = to_int(u.integer("count"), u.path("count"));
      fu.latency = read_class_map(u.get("latency"), u.path("latency"));
      p.functional_units.push_back(std::move(fu));
    }
  }
  p.fetch_stage = r.string("fetch_stage");
  p.memory_stage = r.string("memory_stage");
  p.read_stage = r.string("read_stage");
  p.read_stage_memory = r.has("read_stage_memory") ? r.string("read_stage_memory") : p.read_stage;
  p.write_stage = r.string("write_stage");
  p.write_stage_load = r.has("write_stage_load") ? r.string("write_stage_load") : p.write_stage;
  p.fetch_block_size = to_int(r.integer_or("fetch_block_size", 1), "fetch_block_size");
  p.bus_latency = to_int(r.integer("bus_latency"), "bus_latency");
  p.miss_latency = to_int(r.integer("miss_latency"), "miss_latency");
  p.register_count = to_int(r.integer("register_count"), "register_count");
  if (r.has("contention_window"))
    p.contention_window = to_int(r.integer("contention_window"), "contention_window");
  validate(p);
  return p;
}

std::string print_pipeline(const PipelineSpec& p) {
  Json j;
  j["version"] = p.version;
  j["name"] = p.name;
  j["stages"] = Json::array();
  for (const auto& s : p.stages) {
    Json st{{"name", s.name}, {"width", s.width}, {"latency", s.latency}};
    if (!s.class_latency.empty()) st["class_latency"] = write_class_map(s.class_latency);
    j["stages"].push_back(st);
  }
  j["queues"] = Json::array();
  for (const auto& q : p.queues) j["queues"].push_back({{"after", q.after}, {"capacity", q.capacity}});
  j["functional_units"] = Json::array();
  for (const auto& u : p.functional_units)
    j["functional_units"].push_back({{"name", u.name},
                                     {"stage", u.stage},
                                     {"count", u.count},
                                     {"latency", write_class_map(u.latency)}});
  j["fetch_stage"] = p.fetch_stage;
  j["memory_stage"] = p.memory_stage;
  j["read_stage"] = p.read_stage;
  j["read_stage_memory"] = p.read_stage_memory;
  j["write_stage"] = p.write_stage;
  j["write_stage_load"] = p.write_stage_load;
  j["fetch_block_size"] = p.fetch_block_size;
  j["bus_latency"] = p.bus_latency;
  j["miss_latency"] = p.miss_latency;
  j["register_count"] = p.register_count;
  if (p.contention_window) j["contention_window"] = *p.contention_window;
  return j.dump(2) + "\n";
}

PipelineSpec teaching_pipeline() {
  PipelineSpec p;
  p.name = "teaching";
  for (const char* n : {"FE", "DE", "EX", "ME", "WB"}) p.stages.push_back({n, 2, 1, {}});
  for (const char* n : {"FE", "DE", "EX", "ME"}) p.queues.push_back({n, 2});
  p.fetch_stage = "FE";
  p.memory_stage = "ME";
  p.read_stage = "EX";
  p.read_stage_memory = "ME";
  p.write_stage = "EX";
  p.write_stage_load = "ME";
  p.fetch_block_size = 2;
  p.bus_latency = 9;
  p.miss_latency = 9;
  p.register_count = 16;
  return p;
}

PipelineSpec wide_pipeline() {
  using C = InstrClass;
  PipelineSpec p;
  p.name = "vi";
  for (const char* n : {"FE", "DE", "EX", "CM"}) p.stages.push_back({n, 4, 1, {}});
  for (const char* n : {"FE", "DE", "EX"}) p.queues.push_back({n, 4});
  p.functional_units.push_back(
      {"ALU", "EX", 4, {{C::kAluAdd, 1}, {C::kAluMul, 2}, {C::kAluDiv, 7}, {C::kBranch, 1}, {C::kNop, 1}}});
  p.functional_units.push_back({"FPU", "EX", 1, {{C::kFpAdd, 3}, {C::kFpMul, 5}, {C::kFpDiv, 12}}});
  p.functional_units.push_back({"MU", "EX", 1, {{C::kLoad, 1}, {C::kStore, 1}}});
  p.fetch_stage = "FE";
  p.memory_stage = "EX";
  p.read_stage = "EX";
  p.read_stage_memory = "EX";
  p.write_stage = "EX";
  p.write_stage_load = "EX";
  p.fetch_block_size = 4;
  p.bus_latency = 9;
  p.miss_latency = 7;
  p.register_count = 16;
  return p;
}

PipelineSpec load_pipeline(const std::string& source) {
  if (source == "preset:teaching") return teaching_pipeline();
  if (source == "preset:vi") return wide_pipeline();
  std::ifstream in(source);
  if (!in) throw std::runtime_error("cannot read " + source);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pipeline(ss.str());
}

}  // namespace xddpipe
