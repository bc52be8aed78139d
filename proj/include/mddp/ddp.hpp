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

#ifndef MDDP_DDP_HPP
#define MDDP_DDP_HPP

#include "mddp/task.hpp"

#include <functional>
#include <vector>

namespace mddp
{

/// Paired state/control sequences and their realized cost.
struct Trajectory
{
    std::vector<Vector> states;   // x_0 .. x_T
    std::vector<Vector> controls; // u_0 .. u_{T-1}
    double cost = 0.0;

    int horizon() const { return static_cast<int>(controls.size()); }
};

/// Phi(x_T) + sum_t l_t(x_t, u_t).
double cost_eval(const TaskDefinition &task, const Trajectory &traj);

/// Simulate `controls` from the task's initial state.
Trajectory rollout_open_loop(const TaskDefinition &task, std::vector<Vector> controls);

/// All-zero controls rolled out from x_0, the common initialization.
Trajectory zero_control_trajectory(const TaskDefinition &task);

/// Quadratic model of Q = l + V' o f at one timestep (iLQR form).
struct QExpansion
{
    Vector q_x;
    Vector q_u;
    Matrix q_xx;
    Matrix q_ux;
    Matrix q_uu;
};

/// Quadratic value model. `entropy` is the accumulated V_H term; it stays
/// zero for the vanilla backward pass and never enters v_x / v_xx.
struct ValueExpansion
{
    double value = 0.0;
    Vector v_x;
    Matrix v_xx;
    double entropy = 0.0;
};

/// Time-varying Gaussian policy u_t ~ N(u_bar_t + k_t + K_t dx_t, Sigma_t).
/// `alpha` is the temperature used to build the covariances (0 for vanilla).
struct LocalPolicy
{
    std::vector<Vector> feedforward;
    std::vector<Matrix> feedback;
    std::vector<Matrix> covariance;
    double alpha = 0.0;

    int horizon() const { return static_cast<int>(feedforward.size()); }
};

enum class PolicyKind
{
    vanilla,
    maxent,
};

struct BackwardMode
{
    PolicyKind kind = PolicyKind::vanilla;
    double alpha = 0.0;

    static BackwardMode vanilla() { return {}; }
    static BackwardMode maxent(double alpha) { return {PolicyKind::maxent, alpha}; }
};

struct BackwardPassResult
{
    LocalPolicy policy;
    ValueExpansion value;                 // at t = 0
    std::vector<double> regularization;   // mu used at each timestep
    double expected_decrease = 0.0;       // sum_t k'Q_u + 1/2 k'Q_uu k
};

struct RegularizedQuu
{
    Matrix matrix;
    double mu = 0.0;
    Eigen::LLT<Matrix> cholesky;
};

/// Q_uu + mu I with mu escalated until the Cholesky factorization succeeds:
/// the given mu first, then 1e-6, 1e-5, ... up to 1e6. Throws
/// RegularizationError (timestep -1) when the schedule is exhausted.
RegularizedQuu regularize_quu(const Matrix &q_uu, double mu = 0.0);

QExpansion q_expansion(const CostExpansion &cost, const Linearization &lin, const ValueExpansion &next);

/// Riccati-like sweep from T-1 down to 0 around `traj`. In maxent mode also
/// fills Sigma_t = alpha Q_uu^-1 and accumulates
/// V_H += alpha/2 (ln|Q_uu| - n_u ln(2 pi alpha)).
BackwardPassResult backward_pass(const TaskDefinition &task, const Trajectory &traj, BackwardMode mode);

/// Closed-loop rollout u_t = u_bar_t + eta k_t + eps_t + K_t (x_t - x_bar_t).
/// Throws NumericError (with timestep) when the state diverges.
Trajectory rollout(const TaskDefinition &task, const Trajectory &prev, const LocalPolicy &policy, double eta,
                   const std::vector<Vector> *noise = nullptr);

struct LineSearchResult
{
    Trajectory trajectory;
    bool accepted = false;
    double step = 0.0;
};

/// Backtracking over eta = 1, 1/2, ...; accepts the first strict cost decrease.
/// Diverged rollouts count as rejected steps. Returns `prev` when nothing is accepted.
LineSearchResult line_search(const TaskDefinition &task, const Trajectory &prev, const LocalPolicy &policy);

/// Reported once per slot per iteration, after the backward pass and before
/// the line search moves the nominal.
struct IterationEvent
{
    int iteration;
    int slot;
    const LocalPolicy &policy;
    const Trajectory &nominal;
};
using IterationObserver = std::function<void(const IterationEvent &)>;

struct VanillaResult
{
    Trajectory best;
    std::vector<double> cost_trace; // entry 0 is the initial cost
    int iterations = 0;
    bool converged = false;
};

/// Plain iLQR from zero controls. Stops after the iteration budget, when the
/// line search cannot decrease the cost, or when the relative decrease over
/// the convergence window falls below the tolerance.
VanillaResult solve_vanilla(const TaskDefinition &task, const IterationObserver &observer = {});

/// True when (trace[i-window] - trace[i]) / |trace[i-window]| < tol at the last entry.
bool has_converged(const std::vector<double> &trace, int window, double tol);

} // namespace mddp

#endif // MDDP_DDP_HPP
