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

#ifndef MDDP_COST_HPP
#define MDDP_COST_HPP

#include "mddp/common.hpp"

#include <memory>
#include <vector>

namespace mddp
{

/// A task-space point attached to the state, with its derivatives.
/// `hessian[i]` is the n_x x n_x Hessian of coordinate i; left empty for
/// points that are linear in the state.
struct TaskPoint
{
    Vector position;
    Matrix jacobian;
    std::vector<Matrix> hessian;
};

/// Maps a state to the points that obstacle costs are measured from.
class TaskPointMap
{
public:
    virtual ~TaskPointMap() = default;
    virtual std::vector<TaskPoint> evaluate(const Vector &x, bool with_derivatives) const = 0;
};

/// Single point read directly from consecutive state entries (vehicle position).
class StateSlicePoint final : public TaskPointMap
{
public:
    StateSlicePoint(int state_dim, int offset, int dim);

    std::vector<TaskPoint> evaluate(const Vector &x, bool with_derivatives) const override;

private:
    int state_dim_;
    int offset_;
    int dim_;
};

/// Soft obstacle. Distance is taken over the first `center.size()` coordinates
/// of the task point, so a 2-D center on a 3-D point acts as a vertical cylinder.
struct Obstacle
{
    Vector center;
    double radius = 1.0;
    double weight = 1.0;
};

/// weight * exp(-d^2 / (2 r^2)).
double obstacle_cost(const Vector &point, const Obstacle &obstacle);

/// Value, gradient and Hessian of the obstacle bump with respect to the point.
struct ObstacleDerivatives
{
    double value;
    Vector gradient;
    Matrix hessian;
};
ObstacleDerivatives obstacle_derivatives(const Vector &point, const Obstacle &obstacle);

struct CostExpansion
{
    double l = 0.0;
    Vector l_x;
    Vector l_u;
    Matrix l_xx;
    Matrix l_ux;
    Matrix l_uu;
};

struct TerminalExpansion
{
    double phi = 0.0;
    Vector phi_x;
    Matrix phi_xx;
};

/// Quadratic tracking cost plus a sum of soft obstacle bumps:
///   l(x, u)  = 1/2 (x-g)' Q (x-g) + 1/2 (u-u_g)' R (u-u_g) + sum_obs sum_points bump
///   Phi(x)   = 1/2 (x-g)' Q_f (x-g)
class CostModel
{
public:
    CostModel(Vector goal, Matrix state_weight, Matrix control_weight, Matrix terminal_weight,
              std::vector<Obstacle> obstacles = {}, std::shared_ptr<const TaskPointMap> points = nullptr,
              Vector control_goal = Vector());

    double running(const Vector &x, const Vector &u, int t) const;
    double terminal(const Vector &x) const;
    double obstacle_term(const Vector &x) const;

    CostExpansion quadratize(const Vector &x, const Vector &u, int t) const;
    TerminalExpansion quadratize_terminal(const Vector &x) const;

    int state_dim() const { return static_cast<int>(goal_.size()); }
    int control_dim() const { return static_cast<int>(control_goal_.size()); }
    const Vector &goal() const { return goal_; }
    const Vector &control_goal() const { return control_goal_; }
    const Matrix &state_weight() const { return state_weight_; }
    const Matrix &control_weight() const { return control_weight_; }
    const Matrix &terminal_weight() const { return terminal_weight_; }
    const std::vector<Obstacle> &obstacles() const { return obstacles_; }
    const std::shared_ptr<const TaskPointMap> &points() const { return points_; }

private:
    Vector goal_;
    Vector control_goal_;
    Matrix state_weight_;
    Matrix control_weight_;
    Matrix terminal_weight_;
    std::vector<Obstacle> obstacles_;
    std::shared_ptr<const TaskPointMap> points_;
};

/// Weight matrix from its diagonal.
inline Matrix diagonal_weight(const Vector &diag) { return diag.asDiagonal(); }

} // namespace mddp

#endif // MDDP_COST_HPP
