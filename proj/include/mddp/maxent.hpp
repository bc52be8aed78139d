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

#ifndef MDDP_MAXENT_HPP
#define MDDP_MAXENT_HPP

#include "mddp/ddp.hpp"

#include <optional>
#include <random>

namespace mddp
{

using Rng = std::mt19937_64;

/// Draw eps_t ~ N(0, Sigma_t) for every timestep up front, using the
/// Cholesky factor of each covariance. Policies at or below
/// `deterministic_alpha`, and all-zero covariances, yield exact zeros.
/// Throws CovarianceError when a covariance is not positive definite.
std::vector<Vector> sample_feedforward(const LocalPolicy &policy, Rng &rng, double deterministic_alpha = 1e-12);

/// One nominal trajectory with the policy and entropy term of its most recent
/// backward pass.
struct Mode
{
    Trajectory trajectory;
    std::optional<LocalPolicy> policy;
    double entropy = 0.0;
};

/// Slots of a multi-sample solver. Slot 0 is the elite after each resample.
/// Categorical draws use `rng`; Gaussian draws for slot n use `slot_rngs[n]`,
/// both derived from the seed so results do not depend on evaluation order.
struct ModeSet
{
    std::vector<Mode> modes;
    std::vector<double> weights;
    int iteration = 0;
    Rng rng;
    std::vector<Rng> slot_rngs;

    int size() const { return static_cast<int>(modes.size()); }
    /// Lowest-cost slot, ties to the lowest index.
    int elite_index() const;
    double min_cost() const;
};

/// ME-DDP's two-slot state (elite, explorer).
using SolverState = ModeSet;

/// `count` slots all holding the zero-control rollout, uniform weights.
ModeSet initial_modes(const TaskDefinition &task, int count, std::uint64_t seed);

/// ME-DDP resample: slot 0 takes the lowest-cost slot; every other slot is
/// replaced by a noisy rollout of the elite's Gaussian policy.
ModeSet resample_step(const TaskDefinition &task, ModeSet state);

struct MultiModeResult
{
    Trajectory best;
    std::vector<double> cost_trace;               // min over slots; entry 0 is the initial cost
    std::vector<std::vector<double>> mode_traces; // [slot][iteration]
    std::vector<std::vector<double>> weight_history;
    int frozen_updates = 0; // slot updates skipped after a failed backward pass
};

/// Unimodal maximum-entropy DDP (elite + one explorer).
MultiModeResult solve_me(const TaskDefinition &task, const IterationObserver &observer = {});

namespace detail
{

enum class ExplorerSource
{
    elite,   // every explorer samples the elite's policy
    mixture, // explorers pick a component by the mixture weights
};

/// Replace slots 1..N-1 with samples; slot 0 gets the elite.
ModeSet resample(const TaskDefinition &task, ModeSet state, ExplorerSource source);

MultiModeResult solve_modes(const TaskDefinition &task, int count, ExplorerSource source,
                            const IterationObserver &observer);

} // namespace detail

} // namespace mddp

#endif // MDDP_MAXENT_HPP
