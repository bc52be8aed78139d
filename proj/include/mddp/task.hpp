/*
 Copyright 2026 The mddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef MDDP_TASK_HPP
#define MDDP_TASK_HPP

#include "mddp/cost.hpp"
#include "mddp/dynamics.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace mddp
{

struct SolverConfig
{
    double alpha = 1.0;         // inverse temperature
    int modes = 4;              // mixture components (MME)
    int resample_every = 8;     // resample period m
    int iterations = 100;       // iteration budget K
    std::uint64_t seed = 0;
    int line_search_steps = 11; // eta = 1, 1/2, ..., 2^-(steps-1)
    double convergence_tol = 1e-9;
    int convergence_window = 5;
    int max_resample_retries = 5;
    // At or below this temperature the policy is treated as deterministic.
    double deterministic_alpha = 1e-12;
};

struct TaskDefinition
{
    std::string id;
    std::shared_ptr<const DynamicsModel> dynamics;
    std::shared_ptr<const CostModel> cost;
    int horizon = 1;
    Vector x0;
    SolverConfig solver;

    int state_dim() const { return dynamics->state_dim(); }
    int control_dim() const { return dynamics->control_dim(); }

    /// Throws ContractError when the task is inconsistent. `maxent` adds the
    /// alpha > 0 requirement of the entropy-regularized solvers.
    void validate(bool maxent = false) const;
};

/// Parse a task definition from YAML text. Errors carry the offending line.
TaskDefinition parse_task(const std::string &text);
TaskDefinition load_task(const std::filesystem::path &path);

/// The shipped benchmark tasks, in table order.
const std::vector<std::string> &builtin_task_ids();

/// Directory holding the shipped task configs. Honors MDDP_CONFIG_DIR.
std::filesystem::path default_config_dir();

/// Map a task id to its config file, or accept an existing path as-is.
/// Returns an empty path when neither matches.
std::filesystem::path resolve_task_path(const std::string &id_or_path,
                                        const std::filesystem::path &config_dir = default_config_dir());

} // namespace mddp

#endif // MDDP_TASK_HPP
