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

#ifndef MDDP_KINEMATICS_HPP
#define MDDP_KINEMATICS_HPP

#include "mddp/cost.hpp"

#include <array>

namespace mddp
{

/// Simplified 4-link arm. Joints 0-2 carry a pitch and a yaw angle, joint 3
/// only a yaw angle; joint_angles = [pitch0, yaw0, pitch1, yaw1, pitch2, yaw2, yaw3].
/// Each joint applies Rz(yaw) * Ry(pitch) to the incoming frame and the link
/// extends along the local x axis, so the zero configuration points along +x
/// from a base at the origin.
class ArmKinematics
{
public:
    static constexpr int kJoints = 7;
    static constexpr int kLinks = 4;
    using JointVector = Eigen::Matrix<double, kJoints, 1>;

    ArmKinematics() = default;
    explicit ArmKinematics(std::array<double, kLinks> link_lengths, Eigen::Vector3d base = Eigen::Vector3d::Zero());

    /// End point of `link` (0-based; link 3 ends at the end effector).
    struct LinkPoint
    {
        Eigen::Vector3d position;
        Eigen::Matrix<double, 3, kJoints> jacobian;
        std::array<Eigen::Matrix<double, kJoints, kJoints>, 3> hessian;
    };

    std::array<Eigen::Vector3d, kLinks> link_endpoints(const JointVector &q) const;
    LinkPoint link_point(const JointVector &q, int link, bool with_hessian) const;
    Eigen::Vector3d end_effector(const JointVector &q) const { return link_endpoints(q)[kLinks - 1]; }

    const std::array<double, kLinks> &link_lengths() const { return lengths_; }
    const Eigen::Vector3d &base() const { return base_; }

private:
    std::array<double, kLinks> lengths_{0.33, 0.32, 0.25, 0.15};
    Eigen::Vector3d base_ = Eigen::Vector3d::Zero();
};

/// End-effector position of the default arm.
Eigen::Vector3d forward_kinematics(const Vector &joint_angles);

/// Obstacle points of the arm: the end points of the selected links, read from
/// the joint-angle block at the start of the state.
class ArmPointMap final : public TaskPointMap
{
public:
    ArmPointMap(ArmKinematics arm, std::vector<int> links, int state_dim);

    std::vector<TaskPoint> evaluate(const Vector &x, bool with_derivatives) const override;

private:
    ArmKinematics arm_;
    std::vector<int> links_;
    int state_dim_;
};

} // namespace mddp

#endif // MDDP_KINEMATICS_HPP
