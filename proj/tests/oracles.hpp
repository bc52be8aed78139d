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

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls into the solver code paths it checks.
#ifndef MDDP_TESTS_ORACLES_HPP
#define MDDP_TESTS_ORACLES_HPP

#include "mddp/ddp.hpp"
#include "mddp/kinematics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

namespace oracle
{

using mddp::Matrix;
using mddp::Vector;

/// ||a - b||_F / max(||b||_F, 1): relative for O(1) references, absolute
/// near zero where a relative measure is meaningless.
inline double rel_err(const Matrix &a, const Matrix &b)
{
    return (a - b).norm() / std::max(b.norm(), 1.0);
}

struct Lqr
{
    Matrix a, b, q, r, qf;
    int horizon = 1;
    Vector x0;
};

struct RiccatiSolution
{
    std::vector<Matrix> p;    // P_0 .. P_T
    std::vector<Matrix> gain; // K_0 .. K_{T-1}
    double cost = 0.0;        // optimal cost from x0
};

/// Finite-horizon discrete Riccati recursion for cost
/// 1/2 sum x'Qx + u'Ru + 1/2 x_T' Qf x_T.
inline RiccatiSolution riccati(const Lqr &lqr)
{
    const int t_max = lqr.horizon;
    RiccatiSolution s;
    s.p.assign(t_max + 1, Matrix());
    s.gain.assign(t_max, Matrix());
    s.p[t_max] = lqr.qf;
    for (int t = t_max - 1; t >= 0; --t)
    {
        const Matrix &p = s.p[t + 1];
        const Matrix h = lqr.r + lqr.b.transpose() * p * lqr.b;
        const Matrix g = lqr.b.transpose() * p * lqr.a;
        s.gain[t] = -h.ldlt().solve(g);
        const Matrix pt = lqr.q + lqr.a.transpose() * p * lqr.a + g.transpose() * s.gain[t];
        s.p[t] = 0.5 * (pt + pt.transpose());
    }
    s.cost = 0.5 * lqr.x0.dot(s.p[0] * lqr.x0);
    return s;
}

inline Matrix random_spd(int n, std::mt19937_64 &rng, double floor = 0.1)
{
    std::normal_distribution<double> normal;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = normal(rng);
    return m * m.transpose() / n + floor * Matrix::Identity(n, n);
}

/// Random LQR with spectral radius of A below ~1.1 so long horizons stay
/// well scaled.
inline Lqr random_lqr(std::mt19937_64 &rng, int nx, int nu, int horizon)
{
    std::normal_distribution<double> normal;
    Lqr l;
    l.a = Matrix(nx, nx);
    l.b = Matrix(nx, nu);
    for (int i = 0; i < nx; ++i)
    {
        for (int j = 0; j < nx; ++j)
            l.a(i, j) = normal(rng);
        for (int j = 0; j < nu; ++j)
            l.b(i, j) = normal(rng);
    }
    const double radius = l.a.eigenvalues().cwiseAbs().maxCoeff();
    l.a *= 1.1 / std::max(radius, 1.1);
    l.q = random_spd(nx, rng);
    l.r = random_spd(nu, rng);
    l.qf = random_spd(nx, rng);
    l.horizon = horizon;
    l.x0 = Vector(nx);
    for (int i = 0; i < nx; ++i)
        l.x0(i) = normal(rng);
    return l;
}

inline mddp::TaskDefinition lqr_task(const Lqr &l)
{
    mddp::TaskDefinition task;
    task.id = "lqr";
    task.dynamics = std::make_shared<mddp::LinearSystem>(l.a, l.b);
    task.cost = std::make_shared<mddp::CostModel>(Vector::Zero(l.a.rows()), l.q, l.r, l.qf);
    task.horizon = l.horizon;
    task.x0 = l.x0;
    return task;
}

struct Jacobians
{
    Matrix f_x;
    Matrix f_u;
};

inline Jacobians central_difference(const mddp::DynamicsModel &m, const Vector &x, const Vector &u,
                                    double h = 1e-6)
{
    Jacobians j{Matrix(m.state_dim(), m.state_dim()), Matrix(m.state_dim(), m.control_dim())};
    for (int i = 0; i < m.state_dim(); ++i)
    {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        j.f_x.col(i) = (m.step(xp, u) - m.step(xm, u)) / (2.0 * h);
    }
    for (int i = 0; i < m.control_dim(); ++i)
    {
        Vector up = u, um = u;
        up(i) += h;
        um(i) -= h;
        j.f_u.col(i) = (m.step(x, up) - m.step(x, um)) / (2.0 * h);
    }
    return j;
}

/// Gradient of a scalar function by central differences.
template <typename F>
Vector gradient(F &&f, const Vector &x, double h = 1e-6)
{
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

/// Jacobian of a vector function by central differences.
template <typename F>
Matrix jacobian(F &&f, const Vector &x, double h = 1e-6)
{
    const Vector f0 = f(x);
    Matrix j(f0.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        j.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

/// End point of each link by composing 4x4 homogeneous transforms: per joint
/// a yaw about z, then a pitch about y, then a translation along x.
inline std::vector<Eigen::Vector3d> transform_chain(const Vector &q, const std::array<double, 4> &lengths)
{
    auto rz = [](double a) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(0, 0) = std::cos(a);
        m(0, 1) = -std::sin(a);
        m(1, 0) = std::sin(a);
        m(1, 1) = std::cos(a);
        return m;
    };
    auto ry = [](double a) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(0, 0) = std::cos(a);
        m(0, 2) = std::sin(a);
        m(2, 0) = -std::sin(a);
        m(2, 2) = std::cos(a);
        return m;
    };
    auto tx = [](double d) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(0, 3) = d;
        return m;
    };
    const double pitch[4] = {q(0), q(2), q(4), 0.0};
    const double yaw[4] = {q(1), q(3), q(5), q(6)};
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
    std::vector<Eigen::Vector3d> points;
    for (int j = 0; j < 4; ++j)
    {
        t = t * rz(yaw[j]) * ry(pitch[j]) * tx(lengths[static_cast<std::size_t>(j)]);
        points.push_back(t.block<3, 1>(0, 3));
    }
    return points;
}

/// Soft value -alpha ln z(x0) of a scalar linear system x' = a x + b u with
/// running cost 1/2 (q x^2 + r u^2) and terminal cost 1/2 qf x^2, where
///   z_T(x) = exp(-qf x^2 / (2 alpha)),
///   z_t(x) = integral exp(-l(x, u) / alpha) z_{t+1}(a x + b u) du.
/// Each integral is a trapezoid rule on [-half_width, half_width] evaluated
/// in the log domain.
struct ScalarGibbs
{
    double a = 1.0, b = 1.0, q = 1.0, r = 1.0, qf = 1.0;
    double alpha = 1.0;
    double half_width = 12.0;
    int points = 2001;

    double log_z(double x, int steps_left) const
    {
        if (steps_left == 0)
            return -0.5 * qf * x * x / alpha;
        const double h = 2.0 * half_width / (points - 1);
        std::vector<double> terms(static_cast<std::size_t>(points));
        double peak = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < points; ++i)
        {
            const double u = -half_width + h * i;
            const double running = 0.5 * (q * x * x + r * u * u);
            double term = -running / alpha + log_z(a * x + b * u, steps_left - 1);
            if (i == 0 || i == points - 1)
                term += std::log(0.5);
            terms[static_cast<std::size_t>(i)] = term;
            peak = std::max(peak, term);
        }
        double sum = 0.0;
        for (double t : terms)
            sum += std::exp(t - peak);
        return peak + std::log(sum * h);
    }

    double soft_value(double x0, int horizon) const { return -alpha * log_z(x0, horizon); }
};

} // namespace oracle

#endif // MDDP_TESTS_ORACLES_HPP
