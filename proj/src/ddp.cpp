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

#include "mddp/ddp.hpp"

#include <cmath>
#include <numbers>

namespace mddp
{

double cost_eval(const TaskDefinition &task, const Trajectory &traj)
{
    if (traj.horizon() != task.horizon || static_cast<int>(traj.states.size()) != task.horizon + 1)
    {
        throw ContractError("trajectory length " + std::to_string(traj.horizon()) + " does not match horizon " +
                            std::to_string(task.horizon));
    }
    double total = task.cost->terminal(traj.states.back());
    for (int t = 0; t < task.horizon; ++t)
        total += task.cost->running(traj.states[t], traj.controls[t], t);
    return total;
}

Trajectory rollout_open_loop(const TaskDefinition &task, std::vector<Vector> controls)
{
    if (static_cast<int>(controls.size()) != task.horizon)
        throw ContractError("control sequence length does not match horizon");
    Trajectory traj;
    traj.controls = std::move(controls);
    traj.states.reserve(task.horizon + 1);
    traj.states.push_back(task.x0);
    for (int t = 0; t < task.horizon; ++t)
    {
        try
        {
            traj.states.push_back(task.dynamics->step(traj.states[t], traj.controls[t]));
        }
        catch (const NumericError &e)
        {
            throw NumericError("rollout diverged", t);
        }
    }
    traj.cost = cost_eval(task, traj);
    return traj;
}

Trajectory zero_control_trajectory(const TaskDefinition &task)
{
    return rollout_open_loop(task, std::vector<Vector>(task.horizon, Vector::Zero(task.control_dim())));
}

RegularizedQuu regularize_quu(const Matrix &q_uu, double mu)
{
    constexpr double kFirstMu = 1e-6;
    constexpr double kMaxMu = 1e6;
    const auto n = q_uu.rows();
    RegularizedQuu out;
    out.mu = mu;
    while (true)
    {
        out.matrix = q_uu;
        out.matrix.diagonal().array() += out.mu;
        out.cholesky.compute(out.matrix);
        if (out.cholesky.info() == Eigen::Success)
            return out;
        out.mu = out.mu < kFirstMu ? kFirstMu : out.mu * 10.0;
        // Allow for round-off in the repeated multiplication.
        if (out.mu > kMaxMu * (1.0 + 1e-9) || n == 0)
            throw RegularizationError("Q_uu is not positive definite after maximum regularization", -1);
    }
}

QExpansion q_expansion(const CostExpansion &cost, const Linearization &lin, const ValueExpansion &next)
{
    QExpansion q;
    q.q_x = cost.l_x + lin.f_x.transpose() * next.v_x;
    q.q_u = cost.l_u + lin.f_u.transpose() * next.v_x;
    const Matrix vxx_fx = next.v_xx * lin.f_x;
    q.q_xx = symmetrized(cost.l_xx + lin.f_x.transpose() * vxx_fx);
    q.q_ux = cost.l_ux + lin.f_u.transpose() * vxx_fx;
    q.q_uu = symmetrized(cost.l_uu + lin.f_u.transpose() * next.v_xx * lin.f_u);
    return q;
}

BackwardPassResult backward_pass(const TaskDefinition &task, const Trajectory &traj, BackwardMode mode)
{
    const int horizon = task.horizon;
    if (traj.horizon() != horizon)
        throw ContractError("backward pass: trajectory length does not match horizon");
    const bool maxent = mode.kind == PolicyKind::maxent;
    if (maxent && !(mode.alpha > 0.0))
        throw ContractError("maxent backward pass needs alpha > 0");

    const int nu = task.control_dim();
    const double log_two_pi_alpha = maxent ? std::log(2.0 * std::numbers::pi * mode.alpha) : 0.0;

    BackwardPassResult out;
    LocalPolicy &policy = out.policy;
    policy.alpha = maxent ? mode.alpha : 0.0;
    policy.feedforward.resize(horizon);
    policy.feedback.resize(horizon);
    policy.covariance.resize(horizon);
    out.regularization.resize(horizon);

    const TerminalExpansion term = task.cost->quadratize_terminal(traj.states.back());

    // One damping level for the whole pass. When a timestep needs more, the
    // pass restarts from the terminal so that curvature stays consistent.
    double pass_mu = 0.0;
restart:
    ValueExpansion value{term.phi, term.phi_x, term.phi_xx, 0.0};
    out.expected_decrease = 0.0;

    for (int t = horizon - 1; t >= 0; --t)
    {
        const CostExpansion l = task.cost->quadratize(traj.states[t], traj.controls[t], t);
        const Linearization lin = task.dynamics->linearize(traj.states[t], traj.controls[t]);
        const QExpansion q = q_expansion(l, lin, value);

        RegularizedQuu reg;
        try
        {
            reg = regularize_quu(q.q_uu, pass_mu);
        }
        catch (const RegularizationError &e)
        {
            throw RegularizationError("Q_uu is not positive definite after maximum regularization", t);
        }
        if (reg.mu > pass_mu)
        {
            pass_mu = reg.mu;
            goto restart;
        }
        out.regularization[t] = reg.mu;

        Vector k = -reg.cholesky.solve(q.q_u);
        Matrix gain = -reg.cholesky.solve(q.q_ux);

        const Vector quu_k = q.q_uu * k;
        const double decrease = k.dot(q.q_u) + 0.5 * k.dot(quu_k);
        value.value = value.value + l.l + decrease;
        value.v_x = q.q_x + gain.transpose() * quu_k + gain.transpose() * q.q_u + q.q_ux.transpose() * k;
        value.v_xx = symmetrized(q.q_xx + gain.transpose() * q.q_uu * gain + gain.transpose() * q.q_ux +
                                 q.q_ux.transpose() * gain);
        out.expected_decrease += decrease;

        if (maxent)
        {
            policy.covariance[t] = symmetrized(mode.alpha * reg.cholesky.solve(Matrix::Identity(nu, nu)));
            const Matrix l_factor = reg.cholesky.matrixL();
            const double log_det = 2.0 * l_factor.diagonal().array().log().sum();
            value.entropy += 0.5 * mode.alpha * (log_det - nu * log_two_pi_alpha);
        }
        else
        {
            policy.covariance[t] = Matrix::Zero(nu, nu);
        }

        if (!std::isfinite(value.value) || !value.v_x.allFinite() || !value.v_xx.allFinite() ||
            !std::isfinite(value.entropy) || !k.allFinite() || !gain.allFinite())
            throw NumericError("backward pass produced non-finite values", t);

        policy.feedforward[t] = std::move(k);
        policy.feedback[t] = std::move(gain);
    }
    out.value = std::move(value);
    return out;
}

Trajectory rollout(const TaskDefinition &task, const Trajectory &prev, const LocalPolicy &policy, double eta,
                   const std::vector<Vector> *noise)
{
    const int horizon = task.horizon;
    if (prev.horizon() != horizon || policy.horizon() != horizon)
        throw ContractError("rollout: trajectory/policy length does not match horizon");
    if (noise && static_cast<int>(noise->size()) != horizon)
        throw ContractError("rollout: noise length does not match horizon");

    Trajectory traj;
    traj.states.reserve(horizon + 1);
    traj.controls.reserve(horizon);
    traj.states.push_back(task.x0);
    for (int t = 0; t < horizon; ++t)
    {
        Vector u = prev.controls[t] + eta * policy.feedforward[t];
        if (noise)
            u += (*noise)[t];
        u += policy.feedback[t] * (traj.states[t] - prev.states[t]);
        if (!u.allFinite())
            throw NumericError("rollout produced a non-finite control", t);
        try
        {
            traj.states.push_back(task.dynamics->step(traj.states[t], u));
        }
        catch (const NumericError &)
        {
            throw NumericError("rollout diverged", t);
        }
        traj.controls.push_back(std::move(u));
    }
    traj.cost = cost_eval(task, traj);
    if (!std::isfinite(traj.cost))
        throw NumericError("rollout cost is not finite", horizon);
    return traj;
}

LineSearchResult line_search(const TaskDefinition &task, const Trajectory &prev, const LocalPolicy &policy)
{
    double eta = 1.0;
    for (int i = 0; i < task.solver.line_search_steps; ++i, eta *= 0.5)
    {
        try
        {
            Trajectory candidate = rollout(task, prev, policy, eta);
            if (candidate.cost < prev.cost)
                return {std::move(candidate), true, eta};
        }
        catch (const NumericError &)
        {
            // diverged: try a shorter step
        }
    }
    return {prev, false, 0.0};
}

bool has_converged(const std::vector<double> &trace, int window, double tol)
{
    if (window < 1 || static_cast<int>(trace.size()) <= window)
        return false;
    const double before = trace[trace.size() - 1 - static_cast<std::size_t>(window)];
    const double now = trace.back();
    const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
    return (before - now) / scale < tol;
}

VanillaResult solve_vanilla(const TaskDefinition &task, const IterationObserver &observer)
{
    task.validate(false);
    VanillaResult result;
    result.best = zero_control_trajectory(task);
    result.cost_trace.push_back(result.best.cost);

    for (int k = 1; k <= task.solver.iterations; ++k)
    {
        const BackwardPassResult bp = backward_pass(task, result.best, BackwardMode::vanilla());
        if (observer)
            observer({k, 0, bp.policy, result.best});
        LineSearchResult ls = line_search(task, result.best, bp.policy);
        result.iterations = k;
        if (!ls.accepted)
        {
            result.converged = true;
            break;
        }
        result.best = std::move(ls.trajectory);
        result.cost_trace.push_back(result.best.cost);
        if (has_converged(result.cost_trace, task.solver.convergence_window, task.solver.convergence_tol))
        {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace mddp
