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
#include <limits>
#include <tuple>

#include "xddpipe/oracle.hpp"

namespace xddpipe::oracle {

BusSchedule simulate_contention(std::optional<std::int64_t> me_ready, const std::vector<BusRequester>& fes,
                                std::int64_t lambda) {
  // (ready, rank, who): rank 0 puts the memory access ahead on ties.
  std::vector<std::tuple<std::int64_t, int, int>> queue;
  if (me_ready) queue.emplace_back(*me_ready, 0, -1);
  for (std::size_t i = 0; i < fes.size(); ++i)
    if (fes[i].uses_bus) queue.emplace_back(fes[i].ready, 1, static_cast<int>(i));
  std::sort(queue.begin(), queue.end());

  BusSchedule out;
  out.fes.resize(fes.size());
  std::int64_t free_at = std::numeric_limits<std::int64_t>::min();
  for (const auto& [ready, rank, who] : queue) {
    std::int64_t grant = std::max(ready, free_at);
    free_at = grant + lambda;
    if (who < 0)
      out.me = grant;
    else
      out.fes[static_cast<std::size_t>(who)] = grant;
    out.order.push_back(who);
  }
  return out;
}

}  // namespace xddpipe::oracle
