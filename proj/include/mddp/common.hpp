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

#ifndef MDDP_COMMON_HPP
#define MDDP_COMMON_HPP

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mddp
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (wrong dimension, bad argument).
class ContractError : public Error
{
public:
    using Error::Error;
};

/// A computation produced a non-finite value. `timestep` is set when the
/// failure can be attributed to a specific step of a trajectory.
class NumericError : public Error
{
public:
    explicit NumericError(const std::string &what, std::optional<int> timestep = std::nullopt);

    std::optional<int> timestep() const { return timestep_; }

private:
    std::optional<int> timestep_;
};

/// Q_uu could not be made positive definite within the regularization schedule.
class RegularizationError : public Error
{
public:
    RegularizationError(const std::string &what, int timestep);

    int timestep() const { return timestep_; }

private:
    int timestep_;
};

/// A policy covariance was not symmetric positive definite.
class CovarianceError : public Error
{
public:
    using Error::Error;
};

/// Malformed task configuration. `line` is 1-based; 0 when unknown.
class ConfigError : public Error
{
public:
    ConfigError(const std::string &message, int line, const std::string &source = "");

    int line() const { return line_; }
    const std::string &message() const { return message_; }
    const std::string &source() const { return source_; }

private:
    std::string message_;
    int line_;
    std::string source_;
};

inline bool all_finite(const Vector &v) { return v.allFinite(); }

/// (M + M^T) / 2
inline Matrix symmetrized(const Matrix &m) { return 0.5 * (m + m.transpose()); }

} // namespace mddp

#endif // MDDP_COMMON_HPP
