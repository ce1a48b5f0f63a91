// Copyright 2026 The unravel Authors
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

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "unravel/config.hpp"
#include "unravel/ensemble.hpp"

namespace unravel::cli {

/// Exit codes: 0 success/pass, 1 usage or input error, 2 scientific failure
/// (non-positive generator, failed validation).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitScientific = 2;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_list_models(std::ostream& out);
int cmd_classify(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir, int workers,
                 std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, const std::filesystem::path& out_dir, int workers,
                 std::ostream& out, std::ostream& err);

/// "t,re_rho_0_0,im_rho_0_0,re_rho_0_1,..." over i <= j, plus bloch_x/y/z for N = 2.
std::string ensemble_csv_header(int dim);
void write_ensemble_csv(std::ostream& os, const DensitySeries& series);

}  // namespace unravel::cli
