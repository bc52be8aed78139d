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

#include "mddp/kinematics.hpp"

#include <cmath>

namespace mddp
{

namespace
{

Eigen::Matrix3d rot_y(double a)
{
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitY()).toRotationMatrix();
}

Eigen::Matrix3d rot_z(double a)
{
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

// One revolute axis of the chain in world coordinates.
struct Axis
{
    Eigen::Vector3d direction;
    Eigen::Vector3d origin;
    int angle_index;
};

// Index of the joint angles (pitch, yaw) of joint j; joint 3 has no pitch.
constexpr int kPitchIndex[4] = {0, 2, 4, -1};
constexpr int kYawIndex[4] = {1, 3, 5, 6};

} // namespace

ArmKinematics::ArmKinematics(std::array<double, kLinks> link_lengths, Eigen::Vector3d base)
    : lengths_(link_lengths), base_(std::move(base))
{
}

std::array<Eigen::Vector3d, ArmKinematics::kLinks> ArmKinematics::link_endpoints(const JointVector &q) const
{
    std::array<Eigen::Vector3d, kLinks> points;
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    Eigen::Vector3d origin = base_;
    for (int j = 0; j < kLinks; ++j)
    {
        frame = frame * rot_z(q(kYawIndex[j]));
        if (kPitchIndex[j] >= 0)
            frame = frame * rot_y(q(kPitchIndex[j]));
        origin = origin + frame * Eigen::Vector3d(lengths_[j], 0.0, 0.0);
        points[j] = origin;
    }
    return points;
}

ArmKinematics::LinkPoint ArmKinematics::link_point(const JointVector &q, int link, bool with_hessian) const
{
    if (link < 0 || link >= kLinks)
        throw ContractError("arm link index out of range");

    // Axes upstream of the link end point, in chain order (yaw before pitch).
    std::vector<Axis> axes;
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    Eigen::Vector3d origin = base_;
    for (int j = 0; j <= link; ++j)
    {
        axes.push_back({frame * Eigen::Vector3d::UnitZ(), origin, kYawIndex[j]});
        frame = frame * rot_z(q(kYawIndex[j]));
        if (kPitchIndex[j] >= 0)
        {
            axes.push_back({frame * Eigen::Vector3d::UnitY(), origin, kPitchIndex[j]});
            frame = frame * rot_y(q(kPitchIndex[j]));
        }
        origin = origin + frame * Eigen::Vector3d(lengths_[j], 0.0, 0.0);
    }

    LinkPoint out;
    out.position = origin;
    out.jacobian.setZero();
    for (auto &h : out.hessian)
        h.setZero();

    for (const Axis &a : axes)
        out.jacobian.col(a.angle_index) = a.direction.cross(out.position - a.origin);

    if (with_hessian)
    {
        // For revolute axes k upstream of (or equal to) l:
        //   d^2 p / dq_k dq_l = z_k x (z_l x (p - o_l)).
        for (std::size_t k = 0; k < axes.size(); ++k)
        {
            for (std::size_t l = k; l < axes.size(); ++l)
            {
                const Eigen::Vector3d h =
                    axes[k].direction.cross(axes[l].direction.cross(out.position - axes[l].origin));
                for (int c = 0; c < 3; ++c)
                {
                    out.hessian[c](axes[k].angle_index, axes[l].angle_index) = h(c);
                    out.hessian[c](axes[l].angle_index, axes[k].angle_index) = h(c);
                }
            }
        }
    }
    return out;
}

Eigen::Vector3d forward_kinematics(const Vector &joint_angles)
{
    if (joint_angles.size() != ArmKinematics::kJoints)
        throw ContractError("forward_kinematics expects 7 joint angles");
    return ArmKinematics().end_effector(joint_angles);
}

ArmPointMap::ArmPointMap(ArmKinematics arm, std::vector<int> links, int state_dim)
    : arm_(std::move(arm)), links_(std::move(links)), state_dim_(state_dim)
{
    if (state_dim_ < ArmKinematics::kJoints)
        throw ContractError("arm point map needs the joint angles in the state");
    for (int link : links_)
    {
        if (link < 0 || link >= ArmKinematics::kLinks)
            throw ContractError("arm link index out of range");
    }
}

std::vector<TaskPoint> ArmPointMap::evaluate(const Vector &x, bool with_derivatives) const
{
    const ArmKinematics::JointVector q = x.head<ArmKinematics::kJoints>();
    std::vector<TaskPoint> points;
    points.reserve(links_.size());
    if (!with_derivatives)
    {
        const auto ends = arm_.link_endpoints(q);
        for (int link : links_)
            points.push_back({ends[link], Matrix(), {}});
        return points;
    }
    for (int link : links_)
    {
        const auto lp = arm_.link_point(q, link, true);
        TaskPoint p;
        p.position = lp.position;
        p.jacobian = Matrix::Zero(3, state_dim_);
        p.jacobian.leftCols<ArmKinematics::kJoints>() = lp.jacobian;
        p.hessian.assign(3, Matrix::Zero(state_dim_, state_dim_));
        for (int c = 0; c < 3; ++c)
            p.hessian[c].topLeftCorner<ArmKinematics::kJoints, ArmKinematics::kJoints>() = lp.hessian[c];
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace mddp
