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

#include "mddp/cli.hpp"

#include "mddp/bench.hpp"

#include "CLI11.hpp"

#include <sstream>
#include <thread>

namespace mddp
{

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string task_list()
{
    std::string s;
    for (const auto &id : builtin_task_ids())
        s += (s.empty() ? "" : ", ") + id;
    return s;
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        if (!item.empty())
            items.push_back(item);
    }
    return items;
}

struct RunArgs
{
    std::string task;
    std::string solvers = "vanilla,me,mme";
    std::string seeds = "16";
    std::optional<double> alpha;
    std::optional<int> modes;
    int resample_every = 8;
    std::optional<int> iterations;
    std::string out;
    std::string format;
    std::string config_dir;
    int jobs = 0;
    bool no_timing = false;
};

struct SummarizeArgs
{
    std::vector<std::string> inputs;
    std::string out;
    std::string format;
};

int run_command(const RunArgs &args, std::ostream &out, std::ostream &err)
{
    const std::filesystem::path config_dir = args.config_dir.empty() ? default_config_dir() : std::filesystem::path(args.config_dir);
    const std::filesystem::path config = resolve_task_path(args.task, config_dir);
    if (config.empty())
    {
        err << "error: unknown task '" << args.task << "'; available tasks: " << task_list() << "\n";
        return kExitUsage;
    }

    const std::vector<std::string> solvers = split_list(args.solvers);
    for (const auto &s : solvers)
    {
        if (std::find(solver_ids().begin(), solver_ids().end(), s) == solver_ids().end())
        {
            err << "error: unknown solver '" << s << "'; expected vanilla, me or mme\n";
            return kExitUsage;
        }
    }
    if (solvers.empty())
    {
        err << "error: no solver given\n";
        return kExitUsage;
    }

    std::vector<std::uint64_t> seeds;
    try
    {
        seeds = parse_seed_list(args.seeds);
    }
    catch (const ContractError &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::optional<OutputFormat> format;
    if (!args.format.empty())
    {
        format = parse_format(args.format);
        if (!format)
        {
            err << "error: --format must be csv or json\n";
            return kExitUsage;
        }
    }

    SolverOverrides overrides;
    overrides.alpha = args.alpha;
    overrides.modes = args.modes;
    overrides.resample_every = args.resample_every;
    overrides.iterations = args.iterations;
    const int jobs = args.jobs > 0 ? args.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::vector<RunRecord> records;
    try
    {
        for (const auto &solver : solvers)
        {
            auto batch = run_experiment(config, solver, seeds, overrides, jobs);
            records.insert(records.end(), batch.begin(), batch.end());
        }
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    catch (const ContractError &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const SummaryStats stats = summarize(records);
    if (!args.out.empty())
    {
        const OutputFormat fmt = format ? *format : format_from_path(args.out, OutputFormat::json);
        emit(records, stats, fmt, args.out, EmitOptions{!args.no_timing});
    }
    out << format_summary_table(stats);
    for (const auto &r : records)
    {
        if (!r.ok())
            err << "warning: " << r.solver << " seed " << r.seed << " failed: " << r.error << "\n";
    }
    return kExitOk;
}

int summarize_command(const SummarizeArgs &args, std::ostream &out, std::ostream &err)
{
    std::vector<RunRecord> records;
    for (const auto &in : args.inputs)
    {
        auto batch = read_records(in);
        records.insert(records.end(), batch.begin(), batch.end());
    }
    const SummaryStats stats = summarize(records);
    if (!args.out.empty())
    {
        std::optional<OutputFormat> format;
        if (!args.format.empty() && !(format = parse_format(args.format)))
        {
            err << "error: --format must be csv or json\n";
            return kExitUsage;
        }
        write_summary(stats, format ? *format : format_from_path(args.out, OutputFormat::json), args.out);
    }
    out << format_summary_table(stats);
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Maximum-entropy DDP benchmark runner", "mddp"};
    app.require_subcommand(1);

    RunArgs run;
    CLI::App *run_cmd = app.add_subcommand("run", "Run solvers on a task over a list of seeds");
    run_cmd->add_option("--task", run.task, "Task id (" + task_list() + ") or path to a task config")->required();
    run_cmd->add_option("--solver", run.solvers, "vanilla, me, mme, or a comma-separated list")
        ->capture_default_str();
    run_cmd->add_option("--seeds", run.seeds, "Seed count N (0..N-1), range A-B, or list a,b,c")
        ->capture_default_str();
    run_cmd->add_option("--alpha", run.alpha, "Inverse temperature (overrides the config)");
    run_cmd->add_option("--modes", run.modes, "Mixture components for mme (overrides the config)");
    run_cmd->add_option("--resample-every", run.resample_every, "Resample period m")->capture_default_str();
    run_cmd->add_option("--iters", run.iterations, "Iteration budget (overrides the config)");
    run_cmd->add_option("--out", run.out, "Output file (.csv or .json)");
    run_cmd->add_option("--format", run.format, "csv or json (default: from --out extension)");
    run_cmd->add_option("--config-dir", run.config_dir, "Directory holding <task>.yaml configs");
    run_cmd->add_option("--jobs", run.jobs, "Worker threads for seeds (default: hardware concurrency)");
    run_cmd->add_flag("--no-timing", run.no_timing, "Omit wall times and timestamps from JSON output");

    SummarizeArgs summarize_args;
    CLI::App *sum_cmd = app.add_subcommand("summarize", "Summarize records written by `run`");
    sum_cmd->add_option("--in", summarize_args.inputs, "Record file(s) (.json or .csv)")->required();
    sum_cmd->add_option("--out", summarize_args.out, "Summary output file (.csv or .json)");
    sum_cmd->add_option("--format", summarize_args.format, "csv or json");

    CLI::App *list_cmd = app.add_subcommand("list-tasks", "Print the shipped task ids");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try
    {
        if (list_cmd->parsed())
        {
            for (const auto &id : builtin_task_ids())
                out << id << "\n";
            return kExitOk;
        }
        if (run_cmd->parsed())
            return run_command(run, out, err);
        if (sum_cmd->parsed())
            return summarize_command(summarize_args, out, err);
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace mddp
