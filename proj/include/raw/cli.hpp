// Copyright 2026 The RAW Authors.
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

#ifndef RAW_CLI_HPP_
#define RAW_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "raw/config.hpp"
#include "raw/graph.hpp"

namespace raw {

// Entry point shared by the executable and the tests. Returns the process
// exit code: 0 success, 1 usage error, 2 data error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Graph described by the data keys of `cfg` (files or synthetic spec).
AttributedGraph load_run_graph(const RunConfig& cfg);

int cmd_ingest(const RunConfig& cfg, std::ostream& out);
int cmd_synth(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_eval(const RunConfig& cfg, std::ostream& out);
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_gradcheck(const RunConfig& cfg, std::ostream& out);

}  // namespace raw

#endif  // RAW_CLI_HPP_
