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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "xddpipe/errors.hpp"
#include "xddpipe/pipeline_spec.hpp"
#include "xddpipe/program.hpp"

namespace xddpipe {
namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(XDDPIPE_DATA_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string where_of(const std::string& doc) {
  try {
    parse_program(doc);
  } catch (const ValidationError& e) {
    return e.where() + " | " + e.what();
  }
  return "accepted";
}

TEST(PipelineSpecTest, PresetsValidateAndRoundTrip) {
  for (const PipelineSpec& p : {teaching_pipeline(), wide_pipeline()}) {
    EXPECT_NO_THROW(validate(p));
    EXPECT_EQ(parse_pipeline(print_pipeline(p)), p);
  }
}

TEST(PipelineSpecTest, WidePresetLatencies) {
  PipelineSpec p = wide_pipeline();
  int ex = p.stage_index("EX");
  EXPECT_EQ(p.latency(ex, InstrClass::kAluAdd), 1);
  EXPECT_EQ(p.latency(ex, InstrClass::kAluMul), 2);
  EXPECT_EQ(p.latency(ex, InstrClass::kAluDiv), 7);
  EXPECT_EQ(p.latency(ex, InstrClass::kFpAdd), 3);
  EXPECT_EQ(p.latency(ex, InstrClass::kFpMul), 5);
  EXPECT_EQ(p.latency(ex, InstrClass::kFpDiv), 12);
  EXPECT_EQ(p.miss_latency, 7);
  EXPECT_EQ(p.bus_latency, 9);
  EXPECT_EQ(p.functional_units[p.unit_for(ex, InstrClass::kLoad)].name, "MU");
  EXPECT_EQ(p.unit_for(p.stage_index("DE"), InstrClass::kLoad), -1);
}

TEST(PipelineSpecTest, RejectsBadDocuments) {
  PipelineSpec p = teaching_pipeline();
  p.stages[1].width = 0;
  EXPECT_THROW(validate(p), ValidationError);
  p = teaching_pipeline();
  p.queues.push_back({"WB", 2});
  EXPECT_THROW(validate(p), ValidationError);
  p = wide_pipeline();
  p.functional_units[1].latency[InstrClass::kAluAdd] = 1;  // two owners
  EXPECT_THROW(validate(p), ValidationError);
  std::string doc = print_pipeline(teaching_pipeline());
  doc.insert(doc.find("\"name\""), "\"colour\": 3, ");
  try {
    parse_pipeline(doc);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.where(), "colour");
  }
}

TEST(PipelineSpecTest, LoadsPresetNames) {
  EXPECT_EQ(load_pipeline("preset:teaching"), teaching_pipeline());
  EXPECT_EQ(load_pipeline("preset:vi"), wide_pipeline());
  EXPECT_EQ(load_pipeline(std::string(XDDPIPE_DATA_DIR) + "/pipelines/teaching.json"),
            teaching_pipeline());
}

TEST(ProgramTest, MinimalProgram) {
  Cfg g = parse_program(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "alu-add", "fetch": "AH"}]}]})");
  EXPECT_EQ(g.blocks.size(), 1u);
  EXPECT_TRUE(event_inventory(g).empty());
  EXPECT_EQ(g.entry, 0);
  EXPECT_EQ(g.exit, 0);
}

TEST(ProgramTest, SixInstrSequenceRoundTrips) {
  std::string doc = slurp("programs/six_instr.json");
  Cfg g = parse_program(doc);
  ASSERT_EQ(g.blocks[0].instructions.size(), 6u);
  EXPECT_EQ(g.blocks[0].instructions[2].cls, InstrClass::kLoad);
  EXPECT_EQ(parse_program(print_program(g)), g);
  EXPECT_EQ(print_program(parse_program(print_program(g))), print_program(g));
}

TEST(ProgramTest, PrintedFormIsAFixedPoint) {
  for (const char* f : {"programs/diamond.json", "programs/loop.json"}) {
    Cfg g = parse_program(slurp(f));
    std::string printed = print_program(g);
    EXPECT_EQ(print_program(parse_program(printed)), printed) << f;
    EXPECT_EQ(parse_program(printed), g) << f;
  }
}

TEST(ProgramTest, EventInventoryOrder) {
  Cfg g = parse_program(slurp("programs/diamond.json"));
  auto inv = event_inventory(g);
  ASSERT_EQ(inv.size(), 4u);
  EXPECT_EQ(inv[0].name, "DC_head_1");
  EXPECT_EQ(inv[1].name, "IC_head_2");
  EXPECT_EQ(inv[2].name, "IC_left_0");
  EXPECT_EQ(inv[3].name, "IC_right_0");
  EXPECT_EQ(g.blocks[0].instructions[1].data_event, 0u);
  EXPECT_EQ(g.blocks[2].instructions[0].fetch_event, 3u);
  EXPECT_EQ(event_inventory(parse_program(slurp("programs/diamond.json"))), inv);
}

TEST(ProgramTest, TwoFetchesAndOneLoad) {
  Cfg g = parse_program(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "alu-add", "fetch": "NC"},
      {"id": "c", "class": "load", "fetch": "NC", "data": "NC"}]}]})");
  EXPECT_EQ(event_inventory(g).size(), 3u);
}

TEST(ProgramTest, UnboundedCycleIsRejected) {
  std::string doc = R"({"version": 1, "blocks": [
      {"id": "a", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "b", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "c", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "d", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]}],
    "edges": [["a","b"],["a","c"],["b","d"],["c","d"],["d","a"]], "exit": "d"})";
  // Diamond whose join loops back to the top, no bound given.
  EXPECT_NE(where_of(doc).find("unbounded cycle"), std::string::npos);
  std::string no_exit = doc;
  no_exit.replace(no_exit.find(", \"exit\": \"d\""), 13, "");
  EXPECT_NE(where_of(no_exit).find("no exit"), std::string::npos);
  std::string with_exit = R"({"version": 1, "blocks": [
      {"id": "a", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "b", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "e", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]}],
    "edges": [["a","b"],["b","a"],["b","e"]]})";
  EXPECT_NE(where_of(with_exit).find("unbounded cycle"), std::string::npos);
}

TEST(ProgramTest, ValidationLocations) {
  EXPECT_EQ(where_of(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "teleport", "fetch": "AH"}]}]})")
                .substr(0, 31),
            "blocks[0].instructions[0].class");
  EXPECT_NE(where_of(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "nop", "fetch": "AH"}]}], "edges": [["b", "zz"]]})")
                .find("dangling"),
            std::string::npos);
  EXPECT_NE(where_of(R"({"version": 1, "blocks": [
      {"id": "a", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "b", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]}],
      "exit": "a"})")
                .find("unreachable"),
            std::string::npos);
  EXPECT_NE(where_of(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "load", "fetch": "AH"}]}]})")
                .find("data classification"),
            std::string::npos);
  EXPECT_NE(where_of(R"({"version": 1, "blocks": [{"id": "b", "extra": 1, "instructions": []}]})")
                .find("blocks[0].extra"),
            std::string::npos);
  EXPECT_NE(where_of("{not json").find("malformed"), std::string::npos);
}

TEST(ProgramTest, SyntheticBlocks) {
  // Loop at the entry and two sinks: both alpha and omega are added.
  Cfg g = parse_program(R"({"version": 1, "blocks": [
      {"id": "h", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "s1", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]},
      {"id": "s2", "instructions": [{"id": "x", "class": "nop", "fetch": "AH"}]}],
    "edges": [["h","h"],["h","s1"],["h","s2"]], "loops": [{"header": "h", "bound": 2}]})");
  ASSERT_EQ(g.blocks.size(), 5u);
  EXPECT_EQ(g.blocks[0].id, "alpha");
  EXPECT_TRUE(g.blocks[0].synthetic);
  EXPECT_EQ(g.blocks[4].id, "omega");
  EXPECT_EQ(g.loop_bounds.at(1), 2);
  EXPECT_EQ(g.entry, 0);
  EXPECT_EQ(g.exit, 4);
  EXPECT_EQ(parse_program(print_program(g)), g);
}

TEST(ProgramTest, LoopStructure) {
  Cfg g = parse_program(slurp("programs/loop.json"));
  auto back = g.back_edges();
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], std::make_pair(1, 1));
  EXPECT_EQ(g.natural_loop(1), std::vector<int>{1});
  EXPECT_EQ(g.enclosing_loops(1), std::vector<int>{1});
  EXPECT_TRUE(g.enclosing_loops(2).empty());
  EXPECT_TRUE(g.dominates(0, 2));
}

TEST(ProgramTest, RegistersCheckedAgainstPipeline) {
  Cfg g = parse_program(R"({"version": 1, "blocks": [{"id": "b", "instructions": [
      {"id": "a", "class": "alu-add", "reads": [40], "fetch": "AH"}]}]})");
  EXPECT_THROW(validate_against(g, teaching_pipeline()), ValidationError);
}

}  // namespace
}  // namespace xddpipe
