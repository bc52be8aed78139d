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

#include "mddp/cost.hpp"

#include <cmath>

namespace mddp
{

StateSlicePoint::StateSlicePoint(int state_dim, int offset, int dim) : state_dim_(state_dim), offset_(offset), dim_(dim)
{
    if (offset < 0 || dim <= 0 || offset + dim > state_dim)
        throw ContractError("state slice point out of range");
}

std::vector<TaskPoint> StateSlicePoint::evaluate(const Vector &x, bool with_derivatives) const
{
    TaskPoint point;
    point.position = x.segment(offset_, dim_);
    if (with_derivatives)
    {
        point.jacobian = Matrix::Zero(dim_, state_dim_);
        point.jacobian.middleCols(offset_, dim_).setIdentity();
    }
    return {std::move(point)};
}

double obstacle_cost(const Vector &point, const Obstacle &obstacle)
{
    const auto k = obstacle.center.size();
    if (point.size() < k)
        throw ContractError("obstacle center has more coordinates than the task point");
    const double d2 = (point.head(k) - obstacle.center).squaredNorm();
    return obstacle.weight * std::exp(-d2 / (2.0 * obstacle.radius * obstacle.radius));
}

ObstacleDerivatives obstacle_derivatives(const Vector &point, const Obstacle &obstacle)
{
    const auto k = obstacle.center.size();
    const auto dim = point.size();
    if (dim < k)
        throw ContractError("obstacle center has more coordinates than the task point");
    const double inv_r2 = 1.0 / (obstacle.radius * obstacle.radius);
    const Vector diff = point.head(k) - obstacle.center;
    const double value = obstacle.weight * std::exp(-0.5 * diff.squaredNorm() * inv_r2);

    ObstacleDerivatives out{value, Vector::Zero(dim), Matrix::Zero(dim, dim)};
    out.gradient.head(k) = -value * inv_r2 * diff;
    out.hessian.topLeftCorner(k, k) =
        value * (inv_r2 * inv_r2 * diff * diff.transpose() - inv_r2 * Matrix::Identity(k, k));
    return out;
}

CostModel::CostModel(Vector goal, Matrix state_weight, Matrix control_weight, Matrix terminal_weight,
                     std::vector<Obstacle> obstacles, std::shared_ptr<const TaskPointMap> points,
                     Vector control_goal)
    : goal_(std::move(goal)), control_goal_(std::move(control_goal)), state_weight_(std::move(state_weight)),
      control_weight_(std::move(control_weight)), terminal_weight_(std::move(terminal_weight)),
      obstacles_(std::move(obstacles)), points_(std::move(points))
{
    const auto nx = goal_.size();
    const auto nu = control_weight_.rows();
    if (control_goal_.size() == 0)
        control_goal_ = Vector::Zero(nu);
    if (state_weight_.rows() != nx || state_weight_.cols() != nx || terminal_weight_.rows() != nx ||
        terminal_weight_.cols() != nx || control_weight_.cols() != nu || control_goal_.size() != nu)
        throw ContractError("cost weight dimensions do not match the goal/control sizes");
    for (const auto &obs : obstacles_)
    {
        if (!(obs.radius > 0.0))
            throw ContractError("obstacle radius must be positive");
    }
    if (!obstacles_.empty() && !points_)
        throw ContractError("obstacles require a task point map");
}

double CostModel::obstacle_term(const Vector &x) const
{
    if (obstacles_.empty())
        return 0.0;
    double total = 0.0;
    for (const auto &point : points_->evaluate(x, false))
        for (const auto &obs : obstacles_)
            total += obstacle_cost(point.position, obs);
    return total;
}

double CostModel::running(const Vector &x, const Vector &u, int) const
{
    const Vector dx = x - goal_;
    const Vector du = u - control_goal_;
    return 0.5 * dx.dot(state_weight_ * dx) + 0.5 * du.dot(control_weight_ * du) + obstacle_term(x);
}

double CostModel::terminal(const Vector &x) const
{
    const Vector dx = x - goal_;
    return 0.5 * dx.dot(terminal_weight_ * dx);
}

CostExpansion CostModel::quadratize(const Vector &x, const Vector &u, int t) const
{
    const Vector dx = x - goal_;
    const Vector du = u - control_goal_;
    CostExpansion e;
    e.l = 0.5 * dx.dot(state_weight_ * dx) + 0.5 * du.dot(control_weight_ * du);
    e.l_x = symmetrized(state_weight_) * dx;
    e.l_u = symmetrized(control_weight_) * du;
    e.l_xx = symmetrized(state_weight_);
    e.l_uu = symmetrized(control_weight_);
    e.l_ux = Matrix::Zero(u.size(), x.size());

    if (!obstacles_.empty())
    {
        for (const auto &point : points_->evaluate(x, true))
        {
            for (const auto &obs : obstacles_)
            {
                const ObstacleDerivatives d = obstacle_derivatives(point.position, obs);
                e.l += d.value;
                e.l_x += point.jacobian.transpose() * d.gradient;
                e.l_xx += point.jacobian.transpose() * d.hessian * point.jacobian;
                for (std::size_t i = 0; i < point.hessian.size(); ++i)
                    e.l_xx += d.gradient(static_cast<Eigen::Index>(i)) * point.hessian[i];
            }
        }
        e.l_xx = symmetrized(e.l_xx);
    }
    (void)t;

    if (!std::isfinite(e.l) || !e.l_x.allFinite() || !e.l_xx.allFinite() || !e.l_u.allFinite())
        throw NumericError("non-finite running cost expansion");
    return e;
}

TerminalExpansion CostModel::quadratize_terminal(const Vector &x) const
{
    const Vector dx = x - goal_;
    TerminalExpansion e;
    e.phi_xx = symmetrized(terminal_weight_);
    e.phi_x = e.phi_xx * dx;
    e.phi = 0.5 * dx.dot(terminal_weight_ * dx);
    if (!std::isfinite(e.phi) || !e.phi_x.allFinite())
        throw NumericError("non-finite terminal cost expansion");
    return e;
}

} // namespace mddp
