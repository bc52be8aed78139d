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

#include "mddp/maxent.hpp"
#include "mddp/multimodal.hpp"

namespace mddp
{

namespace
{

Rng seeded_stream(std::uint64_t seed, std::uint32_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), stream};
    return Rng(seq);
}

bool is_zero(const Matrix &m) { return (m.array() == 0.0).all(); }

// Fill in the policy of a mode that has not run a backward pass yet.
void ensure_policy(const TaskDefinition &task, Mode &mode)
{
    if (mode.policy)
        return;
    try
    {
        BackwardPassResult bp = backward_pass(task, mode.trajectory, BackwardMode::maxent(task.solver.alpha));
        mode.entropy = bp.value.entropy;
        mode.policy = std::move(bp.policy);
    }
    catch (const RegularizationError &)
    {
    }
    catch (const NumericError &)
    {
    }
}

// Noisy rollout of `source`'s policy centered on its nominal controls.
// Diverged draws are retried; after the retry budget the fallback is copied.
Mode sample_explorer(const TaskDefinition &task, const Mode &source, Rng &rng, const Mode &fallback)
{
    if (!source.policy)
        return fallback;
    const LocalPolicy &policy = *source.policy;
    for (int attempt = 0; attempt <= task.solver.max_resample_retries; ++attempt)
    {
        try
        {
            const std::vector<Vector> noise = sample_feedforward(policy, rng, task.solver.deterministic_alpha);
            Trajectory traj = rollout(task, source.trajectory, policy, 0.0, &noise);
            return {std::move(traj), source.policy, source.entropy};
        }
        catch (const NumericError &)
        {
        }
        catch (const CovarianceError &)
        {
            break;
        }
    }
    return fallback;
}

} // namespace

std::vector<Vector> sample_feedforward(const LocalPolicy &policy, Rng &rng, double deterministic_alpha)
{
    std::vector<Vector> noise;
    noise.reserve(policy.covariance.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool deterministic = policy.alpha <= deterministic_alpha;
    for (const Matrix &cov : policy.covariance)
    {
        const auto nu = cov.rows();
        if (deterministic || is_zero(cov))
        {
            noise.push_back(Vector::Zero(nu));
            continue;
        }
        Eigen::LLT<Matrix> llt(cov);
        if (llt.info() != Eigen::Success)
            throw CovarianceError("policy covariance is not positive definite");
        Vector z(nu);
        for (Eigen::Index i = 0; i < nu; ++i)
            z(i) = normal(rng);
        noise.push_back(llt.matrixL() * z);
    }
    return noise;
}

int ModeSet::elite_index() const
{
    int best = 0;
    for (int n = 1; n < size(); ++n)
    {
        if (modes[n].trajectory.cost < modes[best].trajectory.cost)
            best = n;
    }
    return best;
}

double ModeSet::min_cost() const { return modes[elite_index()].trajectory.cost; }

ModeSet initial_modes(const TaskDefinition &task, int count, std::uint64_t seed)
{
    if (count < 1)
        throw ContractError("need at least one mode");
    ModeSet set;
    const Trajectory start = zero_control_trajectory(task);
    set.modes.assign(count, Mode{start, std::nullopt, 0.0});
    set.weights.assign(count, 1.0 / count);
    set.rng = seeded_stream(seed, 0);
    for (int n = 0; n < count; ++n)
        set.slot_rngs.push_back(seeded_stream(seed, static_cast<std::uint32_t>(n + 1)));
    return set;
}

namespace detail
{

ModeSet resample(const TaskDefinition &task, ModeSet state, ExplorerSource source)
{
    const int count = state.size();
    std::vector<Mode> snapshot = state.modes;
    const int elite = state.elite_index();

    std::vector<double> weights = state.weights;
    if (static_cast<int>(weights.size()) != count)
        weights.assign(count, 1.0 / count);
    std::discrete_distribution<int> categorical(weights.begin(), weights.end());

    state.modes[0] = snapshot[elite];
    for (int n = 1; n < count; ++n)
    {
        const int component = source == ExplorerSource::elite ? elite : categorical(state.rng);
        ensure_policy(task, snapshot[component]);
        state.modes[n] = sample_explorer(task, snapshot[component], state.slot_rngs[n], snapshot[elite]);
    }
    return state;
}

MultiModeResult solve_modes(const TaskDefinition &task, int count, ExplorerSource source,
                            const IterationObserver &observer)
{
    task.validate(true);
    const SolverConfig &config = task.solver;
    ModeSet state = initial_modes(task, count, config.seed);

    MultiModeResult result;
    result.mode_traces.assign(count, {});
    auto record = [&]() {
        result.cost_trace.push_back(state.min_cost());
        for (int n = 0; n < count; ++n)
            result.mode_traces[n].push_back(state.modes[n].trajectory.cost);
        result.weight_history.push_back(state.weights);
    };
    record();

    std::vector<double> costs(count), entropies(count);
    for (int k = 1; k <= config.iterations; ++k)
    {
        state.iteration = k;
        if (k % config.resample_every == 0)
            state = resample(task, std::move(state), source);

        for (int n = 0; n < count; ++n)
        {
            Mode &mode = state.modes[n];
            BackwardPassResult bp;
            try
            {
                bp = backward_pass(task, mode.trajectory, BackwardMode::maxent(config.alpha));
            }
            catch (const RegularizationError &)
            {
                ++result.frozen_updates;
                continue;
            }
            catch (const NumericError &)
            {
                ++result.frozen_updates;
                continue;
            }
            if (observer)
                observer({k, n, bp.policy, mode.trajectory});
            LineSearchResult ls = line_search(task, mode.trajectory, bp.policy);
            if (ls.accepted)
                mode.trajectory = std::move(ls.trajectory);
            mode.entropy = bp.value.entropy;
            mode.policy = std::move(bp.policy);
        }

        for (int n = 0; n < count; ++n)
        {
            costs[n] = state.modes[n].trajectory.cost;
            entropies[n] = state.modes[n].entropy;
        }
        state.weights = compute_weights(costs, entropies, config.alpha);
        record();
    }

    result.best = state.modes[state.elite_index()].trajectory;
    return result;
}

} // namespace detail

ModeSet resample_step(const TaskDefinition &task, ModeSet state)
{
    return detail::resample(task, std::move(state), detail::ExplorerSource::elite);
}

MultiModeResult solve_me(const TaskDefinition &task, const IterationObserver &observer)
{
    return detail::solve_modes(task, 2, detail::ExplorerSource::elite, observer);
}

} // namespace mddp
