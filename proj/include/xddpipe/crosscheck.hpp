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

// Analysis totals along explicit paths, compared with the enumeration.

#ifndef XDDPIPE_CROSSCHECK_HPP
#define XDDPIPE_CROSSCHECK_HPP

#include <string>
#include <vector>

#include "xddpipe/analysis.hpp"
#include "xddpipe/oracle.hpp"

namespace xddpipe {

/// Block times met along one path, with the dynamic access (index into
/// the path's oracle access list) behind every event they mention.
class PathReplay {
 public:
  PathReplay(const Analyzer& an, const AnalysisResult& res, const std::vector<int>& path);

  /// Sum of the block times under one assignment of the dynamic accesses.
  /// Throws InvariantViolation when a time mentions an unknown event.
  std::int64_t total(const std::vector<bool>& miss) const;
  /// Every state met along the path is in the analysis input sets.
  bool covered() const { return covered_; }

 private:
  std::vector<Xdd> times_;
  std::vector<std::map<EventId, std::size_t>> events_;  // per block visit
  bool covered_ = true;
};

struct CrossCheck {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  bool covered = true;
  std::string first_mismatch;

  bool ok() const { return mismatches == 0 && covered; }
};

/// Compares every (path, configuration) total. Throws std::length_error
/// above the enumeration guard.
CrossCheck cross_check(const Analyzer& an, const AnalysisResult& res,
                       std::size_t guard = oracle::kEnumerationGuard);

}  // namespace xddpipe

#endif  // XDDPIPE_CROSSCHECK_HPP
