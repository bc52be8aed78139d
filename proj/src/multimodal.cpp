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

#include "mddp/multimodal.hpp"

#include <algorithm>
#include <cmath>

namespace mddp
{

namespace
{

double soft_min(std::span<const double> values, double alpha)
{
    if (values.empty())
        throw ContractError("log-sum-exp needs at least one component");
    if (!(alpha > 0.0))
        throw ContractError("log-sum-exp needs alpha > 0");
    const double lowest = *std::min_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += std::exp(-(v - lowest) / alpha);
    return lowest - alpha * std::log(sum);
}

} // namespace

double compose_terminal_value(std::span<const double> terminal_values, double alpha)
{
    return soft_min(terminal_values, alpha);
}

double compose_value(std::span<const double> values, double alpha) { return soft_min(values, alpha); }

std::vector<double> compute_weights(std::span<const double> costs, std::span<const double> entropies, double alpha)
{
    if (costs.size() != entropies.size() || costs.empty())
        throw ContractError("compute_weights: costs and entropies must be non-empty and equally sized");
    if (!(alpha > 0.0))
        throw ContractError("compute_weights needs alpha > 0");

    std::vector<double> values(costs.size());
    for (std::size_t n = 0; n < costs.size(); ++n)
        values[n] = costs[n] + entropies[n];
    const double lowest = *std::min_element(values.begin(), values.end());

    std::vector<double> weights(values.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n)
    {
        weights[n] = std::exp(-(values[n] - lowest) / alpha);
        sum += weights[n];
    }
    for (double &w : weights)
        w /= sum;
    return weights;
}

ModeSet resample_modes(const TaskDefinition &task, ModeSet modes)
{
    return detail::resample(task, std::move(modes), detail::ExplorerSource::mixture);
}

MultiModeResult solve_mme(const TaskDefinition &task, const IterationObserver &observer)
{
    return detail::solve_modes(task, task.solver.modes, detail::ExplorerSource::mixture, observer);
}

} // namespace mddp
