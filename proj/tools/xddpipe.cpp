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

#include <CLI11.hpp>
#include <iostream>

#include "xddpipe/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"WCET analysis of in-order pipelines with bus contention"};
  app.require_subcommand(1);

  xddpipe::RunConfig rc;
  std::string widen = "off";
  CLI::App* analyze = app.add_subcommand("analyze", "Analyse one program on one pipeline");
  analyze->add_option("--pipeline", rc.pipeline, "Pipeline file, or preset:teaching / preset:vi")->required();
  analyze->add_option("--program", rc.program, "Program file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--format", rc.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--emit-lp", rc.emit_lp, "Write the IPET linear program here");
  analyze->add_flag("--trace-contention", rc.trace_contention, "Include contention traces");
  analyze->add_option("--max-states", rc.max_states, "Input states per block")->check(CLI::PositiveNumber);
  analyze->add_option("--max-gen", rc.max_gen, "Event generations kept per loop")->check(CLI::PositiveNumber);
  analyze->add_option("--widen", widen, "Join states past --max-states")->check(CLI::IsMember({"on", "off"}));
  analyze->add_flag("--oracle-check", rc.oracle_check, "Compare against path enumeration");
  analyze->add_option("--dump-xdd", rc.dump_xdd, "Write block states and times to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : xddpipe::kExitUsage;
  }
  rc.widen = widen == "on";
  return xddpipe::run(rc, std::cout, std::cerr);
}
