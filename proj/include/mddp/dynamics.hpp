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

#ifndef MDDP_DYNAMICS_HPP
#define MDDP_DYNAMICS_HPP

#include "mddp/common.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <memory>
#include <string>

namespace mddp
{

/// Jacobians of the discrete step map: f_x is n_x x n_x, f_u is n_x x n_u.
struct Linearization
{
    Matrix f_x;
    Matrix f_u;
};

/// Discrete-time deterministic dynamics x' = f(x, u).
///
/// `step` and `linearize` validate dimensions and finiteness and then defer to
/// the model-specific hooks. Models are immutable after construction, so one
/// instance may be shared between concurrently running solvers.
class DynamicsModel
{
public:
    DynamicsModel(int state_dim, int control_dim, double dt);
    virtual ~DynamicsModel() = default;

    virtual std::string name() const = 0;

    int state_dim() const { return state_dim_; }
    int control_dim() const { return control_dim_; }
    double dt() const { return dt_; }

    Vector step(const Vector &x, const Vector &u) const;
    Linearization linearize(const Vector &x, const Vector &u) const;

protected:
    virtual Vector compute_step(const Vector &x, const Vector &u) const = 0;
    virtual Linearization compute_linearization(const Vector &x, const Vector &u) const;

private:
    void check_dims(const Vector &x, const Vector &u) const;

    int state_dim_;
    int control_dim_;
    double dt_;
};

/// Central finite differences of `model.step`.
Linearization finite_difference_linearization(const DynamicsModel &model, const Vector &x,
                                              const Vector &u, double h = 1e-6);

/// x' = A x + B u.
class LinearSystem final : public DynamicsModel
{
public:
    LinearSystem(Matrix a, Matrix b, double dt = 1.0);

    std::string name() const override { return "linear"; }
    const Matrix &a() const { return a_; }
    const Matrix &b() const { return b_; }

protected:
    Vector compute_step(const Vector &x, const Vector &u) const override;
    Linearization compute_linearization(const Vector &x, const Vector &u) const override;

private:
    Matrix a_;
    Matrix b_;
};

/// Double integrator in `dim` dimensions with state [position, velocity] and
/// acceleration control, discretized exactly under zero-order hold.
class PointMass final : public DynamicsModel
{
public:
    explicit PointMass(double dt, int dim = 2);

    std::string name() const override { return "pointmass"; }

protected:
    Vector compute_step(const Vector &x, const Vector &u) const override;
    Linearization compute_linearization(const Vector &x, const Vector &u) const override;

private:
    Matrix a_;
    Matrix b_;
};

// Continuous-time vector fields. Each is templated on the scalar so the same
// code serves plain evaluation and forward-mode differentiation.

/// Dubins vehicle under jerk control: x = [p_x, p_y, theta, v, a], u = [omega, jerk].
struct CarField
{
    static constexpr int kStateDim = 5;
    static constexpr int kControlDim = 2;
    static constexpr const char *kName = "car";

    template <typename S>
    Eigen::Matrix<S, 5, 1> operator()(const Eigen::Matrix<S, 5, 1> &x,
                                      const Eigen::Matrix<S, 2, 1> &u) const
    {
        using std::cos;
        using std::sin;
        Eigen::Matrix<S, 5, 1> dx;
        dx(0) = x(3) * cos(x(2));
        dx(1) = x(3) * sin(x(2));
        dx(2) = u(0);
        dx(3) = x(4);
        dx(4) = u(1);
        return dx;
    }
};

/// Rigid-body quadcopter with Z-Y-X Euler angles.
/// x = [p_x, p_y, p_z, psi, theta, phi, v_x, v_y, v_z, p, q, r] with inertial
/// velocities and body rates; u = [thrust, tau_x, tau_y, tau_z].
struct QuadcopterField
{
    static constexpr int kStateDim = 12;
    static constexpr int kControlDim = 4;
    static constexpr const char *kName = "quadcopter";

    double mass = 1.0;
    double gravity = 9.81;
    Eigen::Vector3d inertia{0.1, 0.1, 0.2};

    template <typename S>
    Eigen::Matrix<S, 12, 1> operator()(const Eigen::Matrix<S, 12, 1> &x,
                                       const Eigen::Matrix<S, 4, 1> &u) const
    {
        using std::cos;
        using std::sin;
        using std::tan;
        const S &psi = x(3);
        const S &theta = x(4);
        const S &phi = x(5);
        const S &p = x(9);
        const S &q = x(10);
        const S &r = x(11);

        const S c_phi = cos(phi), s_phi = sin(phi);
        const S c_th = cos(theta), s_th = sin(theta);
        const S c_psi = cos(psi), s_psi = sin(psi);

        Eigen::Matrix<S, 12, 1> dx;
        dx(0) = x(6);
        dx(1) = x(7);
        dx(2) = x(8);
        // Euler angle rates from body rates.
        dx(3) = (q * s_phi + r * c_phi) / c_th;
        dx(4) = q * c_phi - r * s_phi;
        dx(5) = p + (q * s_phi + r * c_phi) * tan(theta);

        const S thrust_per_mass = u(0) / mass;
        dx(6) = thrust_per_mass * (c_phi * s_th * c_psi + s_phi * s_psi);
        dx(7) = thrust_per_mass * (c_phi * s_th * s_psi - s_phi * c_psi);
        dx(8) = thrust_per_mass * (c_phi * c_th) - gravity;

        const double ix = inertia(0), iy = inertia(1), iz = inertia(2);
        dx(9) = ((iy - iz) * q * r + u(1)) / ix;
        dx(10) = ((iz - ix) * p * r + u(2)) / iy;
        dx(11) = ((ix - iy) * p * q + u(3)) / iz;
        return dx;
    }
};

/// Simplified 7-joint arm: decoupled joint-space double integrators,
/// x = [theta_0..6, dtheta_0..6], u = joint torques.
struct ManipulatorField
{
    static constexpr int kStateDim = 14;
    static constexpr int kControlDim = 7;
    static constexpr const char *kName = "manipulator";

    Eigen::Matrix<double, 7, 1> inertia = Eigen::Matrix<double, 7, 1>::Ones();

    template <typename S>
    Eigen::Matrix<S, 14, 1> operator()(const Eigen::Matrix<S, 14, 1> &x,
                                       const Eigen::Matrix<S, 7, 1> &u) const
    {
        Eigen::Matrix<S, 14, 1> dx;
        for (int i = 0; i < 7; ++i)
        {
            dx(i) = x(7 + i);
            dx(7 + i) = u(i) / inertia(i);
        }
        return dx;
    }
};

/// Classic fourth-order Runge-Kutta discretization of a vector field. The
/// Jacobians are exact derivatives of the RK4 map, obtained by running the
/// integrator on forward-mode dual numbers.
template <typename Field>
class Rk4Model final : public DynamicsModel
{
public:
    static constexpr int kStateDim = Field::kStateDim;
    static constexpr int kControlDim = Field::kControlDim;

    Rk4Model(Field field, double dt)
        : DynamicsModel(kStateDim, kControlDim, dt), field_(std::move(field))
    {
    }

    std::string name() const override { return Field::kName; }
    const Field &field() const { return field_; }

protected:
    Vector compute_step(const Vector &x, const Vector &u) const override
    {
        const Eigen::Matrix<double, kStateDim, 1> xs = x;
        const Eigen::Matrix<double, kControlDim, 1> us = u;
        return integrate<double>(xs, us);
    }

    Linearization compute_linearization(const Vector &x, const Vector &u) const override
    {
        using Derivative = Eigen::Matrix<double, kStateDim + kControlDim, 1>;
        using Dual = Eigen::AutoDiffScalar<Derivative>;

        Eigen::Matrix<Dual, kStateDim, 1> xd;
        Eigen::Matrix<Dual, kControlDim, 1> ud;
        for (int i = 0; i < kStateDim; ++i)
            xd(i) = Dual(x(i), kStateDim + kControlDim, i);
        for (int j = 0; j < kControlDim; ++j)
            ud(j) = Dual(u(j), kStateDim + kControlDim, kStateDim + j);

        const Eigen::Matrix<Dual, kStateDim, 1> next = integrate<Dual>(xd, ud);

        Linearization lin{Matrix(kStateDim, kStateDim), Matrix(kStateDim, kControlDim)};
        for (int i = 0; i < kStateDim; ++i)
        {
            const Derivative &d = next(i).derivatives();
            lin.f_x.row(i) = d.template head<kStateDim>().transpose();
            lin.f_u.row(i) = d.template tail<kControlDim>().transpose();
        }
        return lin;
    }

private:
    template <typename S>
    Eigen::Matrix<S, kStateDim, 1> integrate(const Eigen::Matrix<S, kStateDim, 1> &x,
                                             const Eigen::Matrix<S, kControlDim, 1> &u) const
    {
        const S h(dt());
        const S half_h(0.5 * dt());
        const S sixth_h(dt() / 6.0);
        const Eigen::Matrix<S, kStateDim, 1> k1 = field_(x, u);
        const Eigen::Matrix<S, kStateDim, 1> k2 = field_(Eigen::Matrix<S, kStateDim, 1>(x + half_h * k1), u);
        const Eigen::Matrix<S, kStateDim, 1> k3 = field_(Eigen::Matrix<S, kStateDim, 1>(x + half_h * k2), u);
        const Eigen::Matrix<S, kStateDim, 1> k4 = field_(Eigen::Matrix<S, kStateDim, 1>(x + h * k3), u);
        return x + sixth_h * (k1 + S(2.0) * k2 + S(2.0) * k3 + k4);
    }

    Field field_;
};

using Car = Rk4Model<CarField>;
using Quadcopter = Rk4Model<QuadcopterField>;
using Manipulator = Rk4Model<ManipulatorField>;

} // namespace mddp

#endif // MDDP_DYNAMICS_HPP
