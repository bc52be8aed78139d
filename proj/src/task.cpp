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

#include "mddp/task.hpp"

#include "mddp/kinematics.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef MDDP_DEFAULT_CONFIG_DIR
#define MDDP_DEFAULT_CONFIG_DIR "configs"
#endif

namespace mddp
{

namespace
{

int line_of(const YAML::Node &node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

YAML::Node require(const YAML::Node &parent, const std::string &key)
{
    YAML::Node child = parent[key];
    if (!child)
        throw ConfigError("missing required key '" + key + "'", line_of(parent));
    return child;
}

template <typename T>
T as(const YAML::Node &node, const std::string &what)
{
    try
    {
        return node.as<T>();
    }
    catch (const YAML::Exception &)
    {
        throw ConfigError("invalid value for '" + what + "'", line_of(node));
    }
}

template <typename T>
T get_or(const YAML::Node &parent, const std::string &key, T fallback)
{
    YAML::Node child = parent[key];
    return child ? as<T>(child, key) : fallback;
}

Vector as_vector(const YAML::Node &node, const std::string &what, Eigen::Index expected = -1)
{
    if (!node.IsSequence())
        throw ConfigError("'" + what + "' must be a list of numbers", line_of(node));
    Vector v(static_cast<Eigen::Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = as<double>(node[i], what);
    if (expected >= 0 && v.size() != expected)
    {
        throw ConfigError("'" + what + "' must have " + std::to_string(expected) + " entries, got " +
                              std::to_string(v.size()),
                          line_of(node));
    }
    return v;
}

Matrix as_matrix(const YAML::Node &node, const std::string &what)
{
    if (!node.IsSequence() || node.size() == 0)
        throw ConfigError("'" + what + "' must be a list of rows", line_of(node));
    const Vector first = as_vector(node[0], what);
    Matrix m(static_cast<Eigen::Index>(node.size()), first.size());
    for (std::size_t i = 0; i < node.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = as_vector(node[i], what, first.size()).transpose();
    return m;
}

struct BuiltDynamics
{
    std::shared_ptr<const DynamicsModel> model;
    std::shared_ptr<const TaskPointMap> points;
};

BuiltDynamics build_dynamics(const YAML::Node &node)
{
    const YAML::Node model_node = require(node, "model");
    const std::string model = as<std::string>(model_node, "model");
    const double dt = as<double>(require(node, "dt"), "dt");
    if (!(dt > 0.0))
        throw ConfigError("'dt' must be positive", line_of(node["dt"]));

    if (model == "pointmass")
    {
        const int dim = get_or<int>(node, "dim", 2);
        auto m = std::make_shared<PointMass>(dt, dim);
        return {m, std::make_shared<StateSlicePoint>(2 * dim, 0, dim)};
    }
    if (model == "car")
    {
        auto m = std::make_shared<Car>(CarField{}, dt);
        return {m, std::make_shared<StateSlicePoint>(5, 0, 2)};
    }
    if (model == "quadcopter")
    {
        QuadcopterField field;
        field.mass = get_or<double>(node, "mass", field.mass);
        field.gravity = get_or<double>(node, "gravity", field.gravity);
        if (node["inertia"])
            field.inertia = as_vector(node["inertia"], "inertia", 3);
        if (!(field.mass > 0.0) || !(field.inertia.array() > 0.0).all())
            throw ConfigError("quadcopter mass and inertia must be positive", line_of(node));
        auto m = std::make_shared<Quadcopter>(field, dt);
        return {m, std::make_shared<StateSlicePoint>(12, 0, 3)};
    }
    if (model == "manipulator")
    {
        ManipulatorField field;
        if (node["inertia"])
            field.inertia = as_vector(node["inertia"], "inertia", 7);
        if (!(field.inertia.array() > 0.0).all())
            throw ConfigError("manipulator inertia must be positive", line_of(node["inertia"]));
        std::array<double, ArmKinematics::kLinks> lengths = ArmKinematics().link_lengths();
        if (node["link_lengths"])
        {
            const Vector l = as_vector(node["link_lengths"], "link_lengths", ArmKinematics::kLinks);
            for (int i = 0; i < ArmKinematics::kLinks; ++i)
                lengths[static_cast<std::size_t>(i)] = l(i);
        }
        std::vector<int> links{ArmKinematics::kLinks - 1};
        if (node["collision_links"])
        {
            links.clear();
            for (const auto &l : node["collision_links"])
            {
                const int link = as<int>(l, "collision_links");
                if (link < 0 || link >= ArmKinematics::kLinks)
                    throw ConfigError("collision link index out of range", line_of(l));
                links.push_back(link);
            }
        }
        auto m = std::make_shared<Manipulator>(field, dt);
        return {m, std::make_shared<ArmPointMap>(ArmKinematics(lengths), links, 14)};
    }
    if (model == "linear")
    {
        Matrix a = as_matrix(require(node, "A"), "A");
        Matrix b = as_matrix(require(node, "B"), "B");
        if (a.rows() != a.cols() || b.rows() != a.rows())
            throw ConfigError("linear dynamics needs square A and B with matching rows", line_of(node));
        return {std::make_shared<LinearSystem>(std::move(a), std::move(b), dt), nullptr};
    }
    throw ConfigError("unknown dynamics model '" + model + "'", line_of(model_node));
}

TaskDefinition build_task(const YAML::Node &root)
{
    if (!root.IsMap())
        throw ConfigError("task config must be a mapping", line_of(root));
    if (root["schema_version"])
    {
        const int version = as<int>(root["schema_version"], "schema_version");
        if (version != 1)
            throw ConfigError("unsupported schema_version " + std::to_string(version), line_of(root["schema_version"]));
    }

    TaskDefinition task;
    task.id = get_or<std::string>(root, "id", "task");

    BuiltDynamics dyn = build_dynamics(require(root, "dynamics"));
    task.dynamics = dyn.model;
    const Eigen::Index nx = dyn.model->state_dim();
    const Eigen::Index nu = dyn.model->control_dim();

    const YAML::Node horizon = require(root, "horizon");
    task.horizon = as<int>(horizon, "horizon");
    if (task.horizon < 1)
        throw ConfigError("'horizon' must be at least 1", line_of(horizon));

    task.x0 = as_vector(require(root, "x0"), "x0", nx);
    const Vector goal = as_vector(require(root, "goal"), "goal", nx);

    const YAML::Node cost = require(root, "cost");
    const Vector q = as_vector(require(cost, "state_weight"), "state_weight", nx);
    const Vector r = as_vector(require(cost, "control_weight"), "control_weight", nu);
    const Vector qf = as_vector(require(cost, "terminal_weight"), "terminal_weight", nx);
    Vector control_goal = Vector::Zero(nu);
    if (cost["control_goal"])
        control_goal = as_vector(cost["control_goal"], "control_goal", nu);

    std::vector<Obstacle> obstacles;
    if (const YAML::Node obs = cost["obstacles"])
    {
        if (!obs.IsSequence())
            throw ConfigError("'obstacles' must be a list", line_of(obs));
        for (const auto &o : obs)
        {
            Obstacle obstacle;
            obstacle.center = as_vector(require(o, "center"), "center");
            obstacle.radius = as<double>(require(o, "radius"), "radius");
            obstacle.weight = get_or<double>(o, "weight", 1.0);
            if (!(obstacle.radius > 0.0))
                throw ConfigError("obstacle radius must be positive", line_of(o["radius"]));
            if (obstacle.center.size() < 1 || obstacle.center.size() > 3)
                throw ConfigError("obstacle center must have 1 to 3 coordinates", line_of(o["center"]));
            obstacles.push_back(std::move(obstacle));
        }
        if (!obstacles.empty() && !dyn.points)
            throw ConfigError("obstacles are not supported for this dynamics model", line_of(obs));
    }

    task.cost = std::make_shared<CostModel>(goal, diagonal_weight(q), diagonal_weight(r), diagonal_weight(qf),
                                            std::move(obstacles), dyn.points, control_goal);

    if (const YAML::Node s = root["solver"])
    {
        SolverConfig &c = task.solver;
        c.alpha = get_or<double>(s, "alpha", c.alpha);
        c.modes = get_or<int>(s, "modes", c.modes);
        c.resample_every = get_or<int>(s, "resample_every", c.resample_every);
        c.iterations = get_or<int>(s, "iterations", c.iterations);
        c.seed = get_or<std::uint64_t>(s, "seed", c.seed);
        c.line_search_steps = get_or<int>(s, "line_search_steps", c.line_search_steps);
        c.convergence_tol = get_or<double>(s, "convergence_tol", c.convergence_tol);
        c.convergence_window = get_or<int>(s, "convergence_window", c.convergence_window);
        c.max_resample_retries = get_or<int>(s, "max_resample_retries", c.max_resample_retries);
        if (!(c.alpha > 0.0))
            throw ConfigError("'alpha' must be positive", line_of(s["alpha"]));
        if (c.modes < 1 || c.resample_every < 1 || c.iterations < 0 || c.line_search_steps < 1)
            throw ConfigError("solver counts out of range (modes >= 1, resample_every >= 1, iterations >= 0)",
                              line_of(s));
    }
    return task;
}

} // namespace

void TaskDefinition::validate(bool maxent) const
{
    if (!dynamics || !cost)
        throw ContractError("task is missing dynamics or cost");
    if (horizon < 1)
        throw ContractError("horizon must be at least 1");
    if (x0.size() != dynamics->state_dim() || cost->state_dim() != dynamics->state_dim() ||
        cost->control_dim() != dynamics->control_dim())
        throw ContractError("task dimensions are inconsistent");
    if (solver.modes < 1 || solver.resample_every < 1 || solver.line_search_steps < 1)
        throw ContractError("solver counts must be positive");
    if (maxent && !(solver.alpha > 0.0))
        throw ContractError("entropy-regularized solvers need alpha > 0");
}

TaskDefinition parse_task(const std::string &text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException &e)
    {
        throw ConfigError(e.msg, e.mark.line + 1);
    }
    return build_task(root);
}

TaskDefinition load_task(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open task config '" + path.string() + "'", 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try
    {
        return parse_task(buffer.str());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(e.message(), e.line(), path.string());
    }
}

const std::vector<std::string> &builtin_task_ids()
{
    static const std::vector<std::string> ids{"pointmass", "car", "quadcopter", "manipulator"};
    return ids;
}

std::filesystem::path default_config_dir()
{
    if (const char *env = std::getenv("MDDP_CONFIG_DIR"))
        return env;
    return MDDP_DEFAULT_CONFIG_DIR;
}

std::filesystem::path resolve_task_path(const std::string &id_or_path, const std::filesystem::path &config_dir)
{
    const std::filesystem::path candidate = config_dir / (id_or_path + ".yaml");
    if (std::filesystem::exists(candidate))
        return candidate;
    if (std::filesystem::path(id_or_path).has_extension() && std::filesystem::exists(id_or_path))
        return id_or_path;
    return {};
}

} // namespace mddp
