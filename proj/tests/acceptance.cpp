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

// Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
// exits nonzero if any fails. Reference values come from oracles.hpp.

#include "mddp/bench.hpp"
#include "mddp/maxent.hpp"
#include "mddp/multimodal.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace
{

using namespace mddp;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

std::string config_path(const std::string &id)
{
    return std::string(MDDP_TEST_CONFIG_DIR) + "/" + id + ".yaml";
}

Vector uniform(int n, std::mt19937_64 &rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = d(rng);
    return v;
}

Outcome lqr_exactness()
{
    std::mt19937_64 rng(2024);
    double worst_value = 0.0, worst_gain = 0.0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const int nx = 1 + trial % 6;
        const int nu = 1 + (trial / 2) % 3;
        const int horizon = 5 + (trial * 9) % 46;
        const oracle::Lqr lqr = oracle::random_lqr(rng, nx, nu, horizon);
        const oracle::RiccatiSolution ref = oracle::riccati(lqr);
        const TaskDefinition task = oracle::lqr_task(lqr);
        const BackwardPassResult bp = backward_pass(task, zero_control_trajectory(task), BackwardMode::vanilla());
        worst_value = std::max(worst_value, (bp.value.v_xx - ref.p[0]).norm() / ref.p[0].norm());
        for (int t = 0; t < horizon; ++t)
        {
            const auto i = static_cast<std::size_t>(t);
            worst_gain = std::max(worst_gain, (bp.policy.feedback[i] - ref.gain[i]).norm() / ref.gain[i].norm());
        }
    }
    return {worst_value < 1e-8 && worst_gain < 1e-8,
            "worst value-Hessian error " + fmt("%.2e", worst_value) + ", worst gain error " + fmt("%.2e", worst_gain)};
}

Outcome gibbs_integral()
{
    double worst = 0.0;
    std::ostringstream cases;
    for (int horizon : {1, 2})
    {
        for (double alpha : {0.5, 1.0})
        {
            oracle::ScalarGibbs gibbs;
            gibbs.a = 0.9;
            gibbs.b = 0.5;
            gibbs.q = 1.0;
            gibbs.r = 0.4;
            gibbs.qf = 2.0;
            gibbs.alpha = alpha;
            const double x0 = 1.3;

            oracle::Lqr lqr;
            lqr.a = Matrix::Constant(1, 1, gibbs.a);
            lqr.b = Matrix::Constant(1, 1, gibbs.b);
            lqr.q = Matrix::Constant(1, 1, gibbs.q);
            lqr.r = Matrix::Constant(1, 1, gibbs.r);
            lqr.qf = Matrix::Constant(1, 1, gibbs.qf);
            lqr.horizon = horizon;
            lqr.x0 = Vector::Constant(1, x0);
            const TaskDefinition task = oracle::lqr_task(lqr);
            const BackwardPassResult bp =
                backward_pass(task, zero_control_trajectory(task), BackwardMode::maxent(alpha));

            const double err = std::abs(bp.value.value + bp.value.entropy - gibbs.soft_value(x0, horizon));
            worst = std::max(worst, err);
            cases << " T=" << horizon << ",a=" << alpha << ":" << fmt("%.1e", err);
        }
    }
    return {worst < 1e-4, "worst |V + V_H + alpha ln z| " + fmt("%.2e", worst) + " (" + cases.str().substr(1) + ")"};
}

struct GainLog
{
    std::map<int, std::pair<std::vector<Vector>, std::vector<Matrix>>> by_iteration;

    IterationObserver observer()
    {
        return [this](const IterationEvent &e) {
            if (e.slot == 0)
                by_iteration[e.iteration] = {e.policy.feedforward, e.policy.feedback};
        };
    }
};

Outcome vanishing_entropy()
{
    TaskDefinition task = load_task(config_path("pointmass"));
    task.solver.alpha = 1e-12;
    GainLog plain, maxent;
    const VanillaResult vanilla = solve_vanilla(task, plain.observer());
    const MultiModeResult me = solve_me(task, maxent.observer());

    bool gains_equal = !plain.by_iteration.empty();
    for (const auto &[k, gains] : plain.by_iteration)
    {
        const auto it = maxent.by_iteration.find(k);
        gains_equal = gains_equal && it != maxent.by_iteration.end() && it->second.first == gains.first &&
                      it->second.second == gains.second;
    }
    double worst = 0.0;
    bool lengths_ok = me.cost_trace.size() >= vanilla.cost_trace.size();
    for (std::size_t i = 0; lengths_ok && i < vanilla.cost_trace.size(); ++i)
        worst = std::max(worst, std::abs(me.cost_trace[i] - vanilla.cost_trace[i]));
    return {gains_equal && lengths_ok && worst <= 1e-12,
            std::to_string(plain.by_iteration.size()) + " iterations, gains " +
                (gains_equal ? "bitwise equal" : "differ") + ", max cost gap " + fmt("%.1e", worst)};
}

// Runs shared by the monotonicity and table criteria.
struct BenchRuns
{
    std::vector<RunRecord> records;
    std::map<std::string, double> seconds;
};

BenchRuns run_benchmarks()
{
    BenchRuns runs;
    const auto seeds = parse_seed_list("16");
    const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (const auto &id : builtin_task_ids())
    {
        const auto start = std::chrono::steady_clock::now();
        for (const auto &solver : solver_ids())
        {
            auto batch = run_experiment(config_path(id), solver, seeds, {}, jobs);
            runs.records.insert(runs.records.end(), batch.begin(), batch.end());
        }
        runs.seconds[id] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return runs;
}

Outcome elite_monotonicity(const BenchRuns &runs)
{
    int checked = 0, violations = 0, failures = 0;
    for (const RunRecord &r : runs.records)
    {
        if (r.solver == "vanilla")
            continue;
        ++checked;
        if (!r.ok())
        {
            ++failures;
            continue;
        }
        for (std::size_t i = 1; i < r.trace.size(); ++i)
            violations += r.trace[i] > r.trace[i - 1] ? 1 : 0;
    }
    return {checked == 4 * 2 * 16 && violations == 0 && failures == 0,
            std::to_string(checked) + " traces, " + std::to_string(violations) + " violations, " +
                std::to_string(failures) + " failed runs"};
}

Outcome sampling_correctness()
{
    std::mt19937_64 gen(99);
    const oracle::Lqr lqr = oracle::random_lqr(gen, 4, 3, 6);
    const oracle::RiccatiSolution ref = oracle::riccati(lqr);
    const TaskDefinition task = oracle::lqr_task(lqr);
    const Trajectory nominal = zero_control_trajectory(task);
    const double alpha = 0.7;
    const LocalPolicy policy = backward_pass(task, nominal, BackwardMode::maxent(alpha)).policy;

    // On a zero-control nominal the mean first control is the Riccati
    // feedback applied to x0, and the covariance is alpha times the inverse
    // control Hessian R + B'P_1 B.
    const Vector mean_ref = nominal.controls[0] + ref.gain[0] * lqr.x0;
    const Matrix q_uu = lqr.r + lqr.b.transpose() * ref.p[1] * lqr.b;
    const Matrix cov_ref = alpha * q_uu.inverse();

    Rng rng(5);
    const int draws = 100000;
    Vector sum = Vector::Zero(3);
    Matrix second = Matrix::Zero(3, 3);
    for (int i = 0; i < draws; ++i)
    {
        const Vector u = nominal.controls[0] + policy.feedforward[0] + sample_feedforward(policy, rng)[0];
        sum += u;
        second += u * u.transpose();
    }
    const Vector mean = sum / draws;
    const Matrix cov = second / draws - mean * mean.transpose();
    const double mean_err = (mean - mean_ref).norm() / std::sqrt(cov_ref.trace());
    const double cov_err = (cov - cov_ref).norm() / cov_ref.norm();
    return {mean_err < 0.02 && cov_err < 0.05,
            "mean error " + fmt("%.4f", mean_err) + " of sqrt(tr Sigma), covariance error " + fmt("%.4f", cov_err)};
}

Outcome log_sum_exp_limits()
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> size(1, 10);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    double worst_min = 0.0;
    for (int set = 0; set < 100; ++set)
    {
        std::vector<double> phi(static_cast<std::size_t>(size(rng)));
        for (double &p : phi)
            p = value(rng);
        const double exact = *std::min_element(phi.begin(), phi.end());
        worst_min = std::max(worst_min, std::abs(compose_terminal_value(phi, 1e-3) - exact));
    }
    double worst_equal = 0.0;
    for (int n = 1; n <= 16; ++n)
    {
        const double c = value(rng);
        const std::vector<double> phi(static_cast<std::size_t>(n), c);
        worst_equal = std::max(worst_equal, std::abs(compose_terminal_value(phi, 1.0) - (c - std::log(n))));
    }
    return {worst_min <= 1e-5 && worst_equal <= 1e-12,
            "low-temperature gap " + fmt("%.2e", worst_min) + ", equal-component gap " + fmt("%.1e", worst_equal)};
}

Outcome weight_contract()
{
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_real_distribution<double> cost(0.0, 50.0), entropy(-5.0, 5.0), shift(-100.0, 100.0);
    std::uniform_real_distribution<double> log_alpha(std::log(0.05), std::log(20.0));
    double worst_sum = 0.0, worst_shift = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        const auto n = static_cast<std::size_t>(size(rng));
        std::vector<double> j(n), h(n), shifted(n);
        const double c = shift(rng);
        for (std::size_t i = 0; i < n; ++i)
        {
            j[i] = cost(rng);
            h[i] = entropy(rng);
            shifted[i] = j[i] + c;
        }
        const double alpha = std::exp(log_alpha(rng));
        const std::vector<double> w = compute_weights(j, h, alpha);
        const std::vector<double> ws = compute_weights(shifted, h, alpha);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            total += w[i];
            worst_shift = std::max(worst_shift, std::abs(w[i] - ws[i]));
        }
        worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
    return {worst_sum <= 1e-12 && worst_shift <= 1e-12,
            "worst |sum - 1| " + fmt("%.1e", worst_sum) + ", worst shift deviation " + fmt("%.1e", worst_shift)};
}

Outcome table_ordering(const BenchRuns &runs)
{
    const SummaryStats stats = summarize(runs.records);
    bool pass = true;
    std::ostringstream detail;
    for (const auto &id : builtin_task_ids())
    {
        if (!stats.contains(id, "vanilla") || !stats.contains(id, "me") || !stats.contains(id, "mme"))
        {
            detail << id << ": missing results; ";
            pass = false;
            continue;
        }
        const GroupStats &v = stats.at(id, "vanilla"), &me = stats.at(id, "me"), &mme = stats.at(id, "mme");
        const bool strict = id == "pointmass" || id == "quadcopter";
        bool ok = mme.mean < v.mean && v.std == 0.0 && v.failed + me.failed + mme.failed == 0;
        if (strict)
            ok = ok && mme.mean < me.mean && me.mean < v.mean;
        if (id == "pointmass")
            ok = ok && mean_reduction_pct(v.mean, mme.mean) >= 30.0;
        pass = pass && ok;
        detail << id << " vanilla " << fmt("%.4g", v.mean) << " me " << fmt("%.4g", me.mean) << " mme "
               << fmt("%.4g", mme.mean) << " (-" << fmt("%.1f", mean_reduction_pct(v.mean, mme.mean)) << "%, "
               << fmt("%.1f", runs.seconds.at(id)) << " s)" << (ok ? "" : " <- fails") << "; ";
    }
    std::string text = detail.str();
    if (text.size() >= 2)
        text.resize(text.size() - 2);
    return {pass, text};
}

Outcome derivative_checks()
{
    std::mt19937_64 rng(8);
    double worst_dyn = 0.0, worst_cost = 0.0;
    std::ostringstream per_model;
    for (const auto &id : builtin_task_ids())
    {
        const TaskDefinition task = load_task(config_path(id));
        const DynamicsModel &model = *task.dynamics;
        const CostModel &cost = *task.cost;
        double dyn = 0.0, cst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            Vector x = task.cost->goal() + uniform(task.state_dim(), rng, -1.5, 1.5);
            // Half the points sit near an obstacle so the bump terms matter.
            if (!cost.obstacles().empty() && i % 2 == 0)
            {
                const Obstacle &o = cost.obstacles()[static_cast<std::size_t>(i / 2) % cost.obstacles().size()];
                const int d = static_cast<int>(o.center.size());
                x.head(d) = o.center + uniform(d, rng, -o.radius, o.radius);
            }
            if (id == "manipulator")
                x = uniform(task.state_dim(), rng, -1.5, 1.5);
            const Vector u = uniform(task.control_dim(), rng, -1, 1);

            const Linearization lin = model.linearize(x, u);
            const oracle::Jacobians fd = oracle::central_difference(model, x, u);
            dyn = std::max({dyn, oracle::rel_err(lin.f_x, fd.f_x), oracle::rel_err(lin.f_u, fd.f_u)});

            const CostExpansion e = cost.quadratize(x, u, 0);
            const TerminalExpansion te = cost.quadratize_terminal(x);
            const auto l_of_x = [&](const Vector &y) { return cost.running(y, u, 0); };
            const auto l_of_u = [&](const Vector &v) { return cost.running(x, v, 0); };
            const auto grad_x = [&](const Vector &y) { return Vector(cost.quadratize(y, u, 0).l_x); };
            const auto grad_u = [&](const Vector &v) { return Vector(cost.quadratize(x, v, 0).l_u); };
            const auto grad_u_of_x = [&](const Vector &y) { return Vector(cost.quadratize(y, u, 0).l_u); };
            const auto phi = [&](const Vector &y) { return cost.terminal(y); };
            const auto phi_grad = [&](const Vector &y) { return Vector(cost.quadratize_terminal(y).phi_x); };
            cst = std::max({cst, oracle::rel_err(e.l_x, oracle::gradient(l_of_x, x)),
                            oracle::rel_err(e.l_u, oracle::gradient(l_of_u, u)),
                            oracle::rel_err(e.l_xx, oracle::jacobian(grad_x, x)),
                            oracle::rel_err(e.l_uu, oracle::jacobian(grad_u, u)),
                            oracle::rel_err(e.l_ux, oracle::jacobian(grad_u_of_x, x)),
                            oracle::rel_err(te.phi_x, oracle::gradient(phi, x)),
                            oracle::rel_err(te.phi_xx, oracle::jacobian(phi_grad, x))});
        }
        worst_dyn = std::max(worst_dyn, dyn);
        worst_cost = std::max(worst_cost, cst);
        per_model << " " << id << " " << fmt("%.1e", std::max(dyn, cst));
    }
    return {worst_dyn < 1e-5 && worst_cost < 1e-5, "worst Jacobian error " + fmt("%.2e", worst_dyn) +
                                                       ", worst cost-derivative error " + fmt("%.2e", worst_cost) +
                                                       " (" + per_model.str().substr(1) + ")"};
}

} // namespace

int main()
{
    struct Criterion
    {
        const char *name;
        std::function<Outcome()> run;
    };

    std::optional<BenchRuns> runs;
    const auto bench = [&]() -> const BenchRuns & {
        if (!runs)
            runs = run_benchmarks();
        return *runs;
    };

    const std::vector<Criterion> criteria{
        {"LQR exactness", lqr_exactness},
        {"Gibbs integral", gibbs_integral},
        {"vanishing entropy", vanishing_entropy},
        {"elite monotonicity", [&] { return elite_monotonicity(bench()); }},
        {"sampling correctness", sampling_correctness},
        {"log-sum-exp limits", log_sum_exp_limits},
        {"weight contract", weight_contract},
        {"benchmark ordering", [&] { return table_ordering(bench()); }},
        {"derivative checks", derivative_checks},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try
        {
            outcome = criteria[i].run();
        }
        catch (const std::exception &e)
        {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << ": "
                  << outcome.detail << " [" << fmt("%.2f", seconds) << " s]" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
