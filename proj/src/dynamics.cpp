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

#include "mddp/dynamics.hpp"

namespace mddp
{

DynamicsModel::DynamicsModel(int state_dim, int control_dim, double dt)
    : state_dim_(state_dim), control_dim_(control_dim), dt_(dt)
{
    if (state_dim <= 0 || control_dim <= 0)
        throw ContractError("dynamics dimensions must be positive");
    if (!(dt > 0.0))
        throw ContractError("dynamics step period must be positive");
}

void DynamicsModel::check_dims(const Vector &x, const Vector &u) const
{
    if (x.size() != state_dim_ || u.size() != control_dim_)
    {
        throw ContractError(name() + ": expected state/control of size " + std::to_string(state_dim_) + "/" +
                            std::to_string(control_dim_) + ", got " + std::to_string(x.size()) + "/" +
                            std::to_string(u.size()));
    }
}

Vector DynamicsModel::step(const Vector &x, const Vector &u) const
{
    check_dims(x, u);
    Vector next = compute_step(x, u);
    if (!next.allFinite())
        throw NumericError(name() + ": step produced a non-finite state");
    return next;
}

Linearization DynamicsModel::linearize(const Vector &x, const Vector &u) const
{
    check_dims(x, u);
    Linearization lin = compute_linearization(x, u);
    if (!lin.f_x.allFinite() || !lin.f_u.allFinite())
        throw NumericError(name() + ": non-finite dynamics Jacobian");
    return lin;
}

Linearization DynamicsModel::compute_linearization(const Vector &x, const Vector &u) const
{
    return finite_difference_linearization(*this, x, u);
}

Linearization finite_difference_linearization(const DynamicsModel &model, const Vector &x, const Vector &u,
                                              double h)
{
    const int nx = model.state_dim();
    const int nu = model.control_dim();
    Linearization lin{Matrix(nx, nx), Matrix(nx, nu)};
    Vector xp = x, xm = x;
    for (int i = 0; i < nx; ++i)
    {
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        lin.f_x.col(i) = (model.step(xp, u) - model.step(xm, u)) / (2.0 * h);
        xp(i) = xm(i) = x(i);
    }
    Vector up = u, um = u;
    for (int j = 0; j < nu; ++j)
    {
        up(j) = u(j) + h;
        um(j) = u(j) - h;
        lin.f_u.col(j) = (model.step(x, up) - model.step(x, um)) / (2.0 * h);
        up(j) = um(j) = u(j);
    }
    return lin;
}

LinearSystem::LinearSystem(Matrix a, Matrix b, double dt)
    : DynamicsModel(static_cast<int>(a.rows()), static_cast<int>(b.cols()), dt), a_(std::move(a)), b_(std::move(b))
{
    if (a_.rows() != a_.cols() || b_.rows() != a_.rows())
        throw ContractError("linear system: A must be square and B must have as many rows as A");
}

Vector LinearSystem::compute_step(const Vector &x, const Vector &u) const { return a_ * x + b_ * u; }

Linearization LinearSystem::compute_linearization(const Vector &, const Vector &) const { return {a_, b_}; }

PointMass::PointMass(double dt, int dim) : DynamicsModel(2 * dim, dim, dt)
{
    const Matrix eye = Matrix::Identity(dim, dim);
    a_ = Matrix::Identity(2 * dim, 2 * dim);
    a_.topRightCorner(dim, dim) = dt * eye;
    b_ = Matrix(2 * dim, dim);
    b_.topRows(dim) = 0.5 * dt * dt * eye;
    b_.bottomRows(dim) = dt * eye;
}

Vector PointMass::compute_step(const Vector &x, const Vector &u) const { return a_ * x + b_ * u; }

Linearization PointMass::compute_linearization(const Vector &, const Vector &) const { return {a_, b_}; }

} // namespace mddp
