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

// Random small programs of fixed shapes, as program documents.

#ifndef XDDPIPE_TESTS_RANDOM_CFG_HPP
#define XDDPIPE_TESTS_RANDOM_CFG_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace xddpipe::testing {

enum class Shape { kStraight, kDiamond, kNestedDiamond, kLoop, kLoopDiamond, kNestedLoop };

struct CfgKnobs {
  int registers = 6;
  int min_instrs = 1;
  int max_instrs = 4;
  double p_nc = 0.3;
  double p_am = 0.15;
  int nc_budget = 6;  ///< static NC accesses
};

class CfgBuilder {
 public:
  CfgBuilder(std::mt19937_64& rng, CfgKnobs k) : rng_(rng), k_(k) {}

  std::string block(const std::string& id) {
    nlohmann::json b{{"id", id}, {"instructions", nlohmann::json::array()}};
    int n = std::uniform_int_distribution<int>(k_.min_instrs, k_.max_instrs)(rng_);
    for (int i = 0; i < n; ++i) b["instructions"].push_back(instruction(id + "_" + std::to_string(i)));
    blocks_.push_back(std::move(b));
    return id;
  }
  void edge(const std::string& a, const std::string& b) { edges_.push_back({a, b}); }
  void loop(const std::string& h, int bound) { loops_.push_back({{"header", h}, {"bound", bound}}); }

  std::string document(const std::string& entry, const std::string& exit) const {
    nlohmann::json d{{"version", 1}, {"blocks", blocks_}, {"edges", edges_},
                     {"entry", entry}, {"exit", exit}, {"loops", loops_}};
    return d.dump();
  }

 private:
  std::string access() {
    std::uniform_real_distribution<double> u(0, 1);
    double x = u(rng_);
    if (x < k_.p_nc && nc_ < k_.nc_budget) {
      ++nc_;
      return "NC";
    }
    if (x < k_.p_nc + k_.p_am) return "AM";
    return "AH";
  }
  nlohmann::json instruction(const std::string& id) {
    static const char* classes[] = {"alu-add", "alu-mul", "load", "store", "branch", "nop", "alu-div"};
    std::string cls = classes[std::uniform_int_distribution<int>(0, 6)(rng_)];
    std::uniform_int_distribution<int> reg(0, k_.registers - 1);
    nlohmann::json reads = nlohmann::json::array(), writes = nlohmann::json::array();
    if (cls != "nop") {
      int nr = std::uniform_int_distribution<int>(0, 2)(rng_);
      for (int i = 0; i < nr; ++i) reads.push_back(reg(rng_));
      if (cls != "store" && cls != "branch") writes.push_back(reg(rng_));
    }
    nlohmann::json ins{{"id", id}, {"class", cls}, {"reads", reads}, {"writes", writes}, {"fetch", access()}};
    if (cls == "load" || cls == "store") ins["data"] = access();
    return ins;
  }

  std::mt19937_64& rng_;
  CfgKnobs k_;
  int nc_ = 0;
  nlohmann::json blocks_ = nlohmann::json::array();
  nlohmann::json edges_ = nlohmann::json::array();
  nlohmann::json loops_ = nlohmann::json::array();
};

inline std::string random_program(std::mt19937_64& rng, Shape shape, CfgKnobs k = {}) {
  CfgBuilder b(rng, k);
  std::uniform_int_distribution<int> bound(2, 3);
  switch (shape) {
    case Shape::kStraight: {
      auto a = b.block("a"), c = b.block("b"), d = b.block("c");
      b.edge(a, c);
      b.edge(c, d);
      return b.document(a, d);
    }
    case Shape::kDiamond: {
      auto h = b.block("h"), l = b.block("l"), r = b.block("r"), j = b.block("j");
      b.edge(h, l), b.edge(h, r), b.edge(l, j), b.edge(r, j);
      return b.document(h, j);
    }
    case Shape::kNestedDiamond: {
      auto h = b.block("h"), l = b.block("l"), ll = b.block("ll"), lr = b.block("lr"), lj = b.block("lj"),
           r = b.block("r"), j = b.block("j");
      b.edge(h, l), b.edge(h, r), b.edge(l, ll), b.edge(l, lr), b.edge(ll, lj), b.edge(lr, lj);
      b.edge(lj, j), b.edge(r, j);
      return b.document(h, j);
    }
    case Shape::kLoop: {
      auto p = b.block("p"), body = b.block("body"), q = b.block("q");
      b.edge(p, body), b.edge(body, body), b.edge(body, q);
      b.loop(body, bound(rng));
      return b.document(p, q);
    }
    case Shape::kLoopDiamond: {
      auto p = b.block("p"), h = b.block("h"), l = b.block("l"), r = b.block("r"), t = b.block("t"),
           q = b.block("q");
      b.edge(p, h), b.edge(h, l), b.edge(h, r), b.edge(l, t), b.edge(r, t), b.edge(t, h), b.edge(t, q);
      b.loop(h, 2);
      return b.document(p, q);
    }
    case Shape::kNestedLoop: {
      auto p = b.block("p"), h = b.block("h"), in = b.block("in"), t = b.block("t"), q = b.block("q");
      b.edge(p, h), b.edge(h, in), b.edge(in, in), b.edge(in, t), b.edge(t, h), b.edge(t, q);
      b.loop(h, 2);
      b.loop(in, 2);
      return b.document(p, q);
    }
  }
  return {};
}

}  // namespace xddpipe::testing

#endif  // XDDPIPE_TESTS_RANDOM_CFG_HPP
