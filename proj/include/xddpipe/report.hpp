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

// Command-line driver pieces: IPET file, reports, exit codes.

#ifndef XDDPIPE_REPORT_HPP
#define XDDPIPE_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "xddpipe/ext_time.hpp"
#include "xddpipe/program.hpp"

namespace xddpipe {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       ///< bad flags, unreadable files
  kExitValidation = 2,  ///< malformed pipeline or program
  kExitBudget = 3,      ///< state, iteration or oracle guard breached
  kExitInternal = 4,    ///< invariant violation, oracle mismatch
};

/// LP identifier for a block or edge: ASCII letters, digits, underscore.
std::string lp_name(const std::string& id);

/// Linear program maximising Σ t_b x_b under flow conservation, unit
/// entry and exit counts, and loop bounds. `times` is indexed like
/// cfg.blocks. Throws std::invalid_argument on an infinite time.
std::string emit_ipet(const Cfg& cfg, const std::vector<ExtTime>& times);

/// Heaviest entry-to-exit path. Empty for cyclic graphs.
std::optional<std::int64_t> longest_path(const Cfg& cfg, const std::vector<ExtTime>& times);

struct RunConfig {
  std::string pipeline;  ///< path or preset:teaching / preset:vi
  std::string program;
  std::string format = "text";  ///< text | json
  std::string emit_lp;
  bool trace_contention = false;
  std::size_t max_states = 512;
  std::uint32_t max_gen = 8;
  bool widen = false;
  bool oracle_check = false;
  std::string dump_xdd;
};

/// Runs one analysis; the report goes to `out`, diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace xddpipe

#endif  // XDDPIPE_REPORT_HPP
