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

#ifndef MDDP_MULTIMODAL_HPP
#define MDDP_MULTIMODAL_HPP

#include "mddp/maxent.hpp"

#include <span>

namespace mddp
{

/// -alpha ln sum_n exp(-phi_n / alpha), evaluated with the minimum factored out.
double compose_terminal_value(std::span<const double> terminal_values, double alpha);

/// Same log-sum-exp composition applied to per-mode values V^(n)(x).
double compose_value(std::span<const double> values, double alpha);

/// Mixture weights w_n proportional to exp(-(J_n + V_H,n) / alpha).
std::vector<double> compute_weights(std::span<const double> costs, std::span<const double> entropies, double alpha);

/// MME-DDP resample: slot 0 takes the lowest-cost mode; each other slot draws
/// a component from Categorical(weights) and rolls out that component's
/// policy with sampled feedforward noise.
ModeSet resample_modes(const TaskDefinition &task, ModeSet modes);

/// Multimodal maximum-entropy DDP with task.solver.modes components.
MultiModeResult solve_mme(const TaskDefinition &task, const IterationObserver &observer = {});

} // namespace mddp

#endif // MDDP_MULTIMODAL_HPP
