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

#include "xddpipe/report.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "xddpipe/analysis.hpp"
#include "xddpipe/crosscheck.hpp"
#include "xddpipe/errors.hpp"

namespace xddpipe {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kReportVersion = 1;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

struct OracleLine {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  bool covered = true;
  std::string first;
};

struct Outcome {
  const Cfg* cfg = nullptr;
  const PipelineSpec* pipeline = nullptr;
  const AnalysisResult* res = nullptr;
  std::vector<ExtTime> wcet;
  std::optional<std::int64_t> total;
  std::optional<OracleLine> oracle;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string text_report(const RunConfig& rc, const Outcome& o) {
  const Cfg& cfg = *o.cfg;
  std::ostringstream os;
  os << "xddpipe report v" << kReportVersion << "\n";
  os << "pipeline: " << o.pipeline->name << "\n";
  os << "program: " << rc.program << "\n\n";
  os << "blocks:\n";
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const BlockResult& br = o.res->blocks[b];
    os << "  " << cfg.blocks[b].id << "  wcet " << to_string(o.wcet[b]) << "  in-states " << br.in.size()
       << "  out-states " << br.out.size() << (br.widened ? "  widened" : "") << "\n";
  }
  os << "\nstates per edge:\n";
  for (const auto& [edge, n] : o.res->states_per_edge)
    os << "  " << cfg.blocks[static_cast<std::size_t>(edge.first)].id << " -> "
       << cfg.blocks[static_cast<std::size_t>(edge.second)].id << "  " << n << "\n";
  os << "\nevent lifetimes (instructions):\n";
  for (const auto& [name, n] : o.res->event_lifetime) os << "  " << name << "  " << n << "\n";
  if (rc.trace_contention) {
    os << "\ncontention traces:\n";
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      const std::string& t = o.res->blocks[b].contention_trace;
      if (t.empty()) continue;
      os << "  block " << cfg.blocks[b].id << ":\n";
      std::istringstream lines(t);
      for (std::string line; std::getline(lines, line);) os << "    " << line << "\n";
    }
  }
  os << "\niterations: " << o.res->iterations << "\n";
  os << "pessimized: " << yes_no(o.res->pessimized) << "\n";
  os << "widened: " << yes_no(o.res->widened) << "\n";
  if (o.total)
    os << "wcet: " << *o.total << " (longest path)\n";
  else
    os << "wcet: solve the ILP\n";
  if (o.oracle) {
    const OracleLine& l = *o.oracle;
    if (l.mismatches == 0 && l.covered)
      os << "oracle match: " << l.pairs << " path x configuration pairs\n";
    else
      os << "oracle mismatch: " << l.mismatches << " of " << l.pairs << (l.covered ? "" : ", states not covered")
         << (l.first.empty() ? "" : ", first: " + l.first) << "\n";
  }
  return os.str();
}

std::string json_report(const RunConfig& rc, const Outcome& o) {
  const Cfg& cfg = *o.cfg;
  Json j;
  j["schema"] = "xddpipe-report";
  j["version"] = kReportVersion;
  j["pipeline"] = o.pipeline->name;
  j["program"] = rc.program;
  Json blocks = Json::array();
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const BlockResult& br = o.res->blocks[b];
    Json jb;
    jb["id"] = cfg.blocks[b].id;
    jb["wcet"] = o.wcet[b].is_finite() ? Json(o.wcet[b].value()) : Json(to_string(o.wcet[b]));
    jb["in_states"] = br.in.size();
    jb["out_states"] = br.out.size();
    jb["widened"] = br.widened;
    if (rc.trace_contention) jb["contention_trace"] = br.contention_trace;
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  Json edges = Json::array();
  for (const auto& [edge, n] : o.res->states_per_edge)
    edges.push_back({{"from", cfg.blocks[static_cast<std::size_t>(edge.first)].id},
                     {"to", cfg.blocks[static_cast<std::size_t>(edge.second)].id},
                     {"states", n}});
  j["states_per_edge"] = std::move(edges);
  Json life = Json::object();
  for (const auto& [name, n] : o.res->event_lifetime) life[name] = n;
  j["event_lifetimes"] = std::move(life);
  j["iterations"] = o.res->iterations;
  j["pessimized"] = o.res->pessimized;
  j["widened"] = o.res->widened;
  j["wcet"] = o.total ? Json(*o.total) : Json(nullptr);
  if (o.oracle) {
    j["oracle"] = {{"pairs", o.oracle->pairs},
                   {"mismatches", o.oracle->mismatches},
                   {"covered", o.oracle->covered},
                   {"match", o.oracle->mismatches == 0 && o.oracle->covered}};
  }
  return j.dump(2) + "\n";
}

void dump_xdd(const std::filesystem::path& dir, const Cfg& cfg, const AnalysisResult& res) {
  std::filesystem::create_directories(dir);
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const BlockResult& br = res.blocks[b];
    std::ostringstream os;
    for (std::size_t k = 0; k < br.in.size(); ++k) {
      os << "# in " << k << "\n" << to_text(br.in[k]) << "\n";
      if (k < br.timing.time.size()) os << "# time " << k << "\n" << to_text(br.timing.time[k]) << "\n\n";
    }
    write_file(dir / (lp_name(cfg.blocks[b].id) + ".txt"), os.str());
  }
}

}  // namespace

int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.format != "text" && rc.format != "json") {
    err << "error: unknown format " << rc.format << "\n";
    return kExitUsage;
  }
  if (rc.max_states < 1 || rc.max_gen < 1) {
    err << "error: caps must be at least 1\n";
    return kExitUsage;
  }
  PipelineSpec pipeline;
  Cfg cfg;
  try {
    pipeline = load_pipeline(rc.pipeline);
    cfg = parse_program(read_file(rc.program));
    validate_against(cfg, pipeline);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    XddStore store;
    AnalysisOptions opts;
    opts.max_states = rc.max_states;
    opts.max_gen = rc.max_gen;
    opts.widen = rc.widen;
    opts.trace_contention = rc.trace_contention;
    Analyzer an(store, cfg, pipeline, opts);
    AnalysisResult res = an.run();

    Outcome o{&cfg, &pipeline, &res, {}, {}, {}};
    for (const BlockResult& br : res.blocks) o.wcet.push_back(block_wcet(br.timing));
    bool finite = std::all_of(o.wcet.begin(), o.wcet.end(), [](ExtTime t) { return t.is_finite(); });
    if (finite) o.total = longest_path(cfg, o.wcet);

    if (rc.oracle_check) {
      try {
        CrossCheck c = cross_check(an, res);
        o.oracle = OracleLine{c.pairs, c.mismatches, c.covered, c.first_mismatch};
      } catch (const std::length_error& e) {
        err << "oracle-check refused: " << e.what() << "\n";
        return kExitBudget;
      }
    }
    if (!rc.emit_lp.empty()) write_file(rc.emit_lp, emit_ipet(cfg, o.wcet));
    if (!rc.dump_xdd.empty()) dump_xdd(rc.dump_xdd, cfg, res);

    out << (rc.format == "json" ? json_report(rc, o) : text_report(rc, o));
    if (o.oracle && (o.oracle->mismatches != 0 || !o.oracle->covered)) return kExitInternal;
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace xddpipe
