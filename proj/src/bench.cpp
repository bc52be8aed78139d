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

#include "mddp/bench.hpp"

#include "mddp/ddp.hpp"
#include "mddp/maxent.hpp"
#include "mddp/multimodal.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace mddp
{

namespace
{

constexpr int kSchemaVersion = 1;
using json = nlohmann::json;

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string &s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw Error("malformed number '" + s + "'");
    return v;
}

void write_atomically(const std::filesystem::path &path, const std::string &contents)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out)
            throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error("cannot move output into place at '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json optional_number(const std::optional<double> &v)
{
    return v ? json(*v) : json(nullptr);
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json summary_json(const SummaryStats &stats)
{
    json groups = json::array();
    for (const GroupStats &g : stats.groups)
    {
        groups.push_back({{"task", g.task},
                          {"solver", g.solver},
                          {"count", g.count},
                          {"failed", g.failed},
                          {"mean", g.mean},
                          {"std", g.std},
                          {"min", g.min},
                          {"max", g.max},
                          {"dmean_vs_vanilla_pct", optional_number(g.dmean_vs_vanilla_pct)},
                          {"dmean_vs_me_pct", optional_number(g.dmean_vs_me_pct)}});
    }
    return groups;
}

std::string summary_csv(const SummaryStats &stats)
{
    std::ostringstream out;
    out << "task,solver,count,failed,mean,std,min,max,dmean_vs_vanilla_pct,dmean_vs_me_pct\n";
    for (const GroupStats &g : stats.groups)
    {
        out << g.task << ',' << g.solver << ',' << g.count << ',' << g.failed << ',' << format_double(g.mean) << ','
            << format_double(g.std) << ',' << format_double(g.min) << ',' << format_double(g.max) << ','
            << (g.dmean_vs_vanilla_pct ? format_double(*g.dmean_vs_vanilla_pct) : "") << ','
            << (g.dmean_vs_me_pct ? format_double(*g.dmean_vs_me_pct) : "") << '\n';
    }
    return out.str();
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, sep))
        parts.push_back(item);
    if (!line.empty() && line.back() == sep)
        parts.emplace_back();
    return parts;
}

} // namespace

const std::vector<std::string> &solver_ids()
{
    static const std::vector<std::string> ids{"vanilla", "me", "mme"};
    return ids;
}

bool is_non_increasing(const std::vector<double> &trace)
{
    for (std::size_t i = 1; i < trace.size(); ++i)
    {
        if (!(trace[i] <= trace[i - 1]))
            return false;
    }
    return true;
}

void check_record(const RunRecord &record)
{
    if (record.ok() && !is_non_increasing(record.trace))
    {
        throw InvariantError("cost trace increases for task " + record.task + ", solver " + record.solver +
                             ", seed " + std::to_string(record.seed));
    }
}

RunRecord run_single(const TaskDefinition &base, const std::string &solver, std::uint64_t seed)
{
    TaskDefinition task = base;
    task.solver.seed = seed;

    RunRecord record;
    record.task = task.id;
    record.solver = solver;
    record.seed = seed;
    record.alpha = solver == "vanilla" ? 0.0 : task.solver.alpha;
    record.modes = solver == "vanilla" ? 1 : solver == "me" ? 2 : task.solver.modes;
    record.resample_every = solver == "vanilla" ? 0 : task.solver.resample_every;

    const auto start = std::chrono::steady_clock::now();
    try
    {
        if (solver == "vanilla")
        {
            VanillaResult r = solve_vanilla(task);
            record.trace = std::move(r.cost_trace);
            record.final_cost = r.best.cost;
        }
        else if (solver == "me")
        {
            MultiModeResult r = solve_me(task);
            record.trace = std::move(r.cost_trace);
            record.final_cost = r.best.cost;
        }
        else if (solver == "mme")
        {
            MultiModeResult r = solve_mme(task);
            record.trace = std::move(r.cost_trace);
            record.final_cost = r.best.cost;
        }
        else
        {
            throw ContractError("unknown solver '" + solver + "'");
        }
    }
    catch (const ContractError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        record.status = "failed";
        record.error = e.what();
        record.trace.clear();
        record.final_cost = std::numeric_limits<double>::quiet_NaN();
    }
    record.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check_record(record);
    return record;
}

std::vector<RunRecord> run_experiment(const std::filesystem::path &config, const std::string &solver,
                                      const std::vector<std::uint64_t> &seeds, const SolverOverrides &overrides,
                                      int jobs)
{
    if (std::find(solver_ids().begin(), solver_ids().end(), solver) == solver_ids().end())
        throw ContractError("unknown solver '" + solver + "'");
    TaskDefinition task = load_task(config);
    if (overrides.alpha)
        task.solver.alpha = *overrides.alpha;
    if (overrides.modes)
        task.solver.modes = *overrides.modes;
    if (overrides.resample_every)
        task.solver.resample_every = *overrides.resample_every;
    if (overrides.iterations)
        task.solver.iterations = *overrides.iterations;
    task.validate(solver != "vanilla");

    std::vector<RunRecord> records(seeds.size());
    if (seeds.empty())
        return records;

    if (solver == "vanilla")
    {
        const RunRecord once = run_single(task, solver, seeds.front());
        for (std::size_t i = 0; i < seeds.size(); ++i)
        {
            records[i] = once;
            records[i].seed = seeds[i];
        }
        return records;
    }

    const int workers = std::clamp(jobs, 1, static_cast<int>(seeds.size()));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            records[i] = run_single(task, solver, seeds[i]);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (std::size_t i = next++; i < seeds.size(); i = next++)
                    records[i] = run_single(task, solver, seeds[i]);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    for (const auto &e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
    return records;
}

const GroupStats &SummaryStats::at(const std::string &task, const std::string &solver) const
{
    for (const GroupStats &g : groups)
    {
        if (g.task == task && g.solver == solver)
            return g;
    }
    throw MissingGroupError("no successful runs for task '" + task + "' with solver '" + solver + "'");
}

bool SummaryStats::contains(const std::string &task, const std::string &solver) const
{
    return std::any_of(groups.begin(), groups.end(),
                       [&](const GroupStats &g) { return g.task == task && g.solver == solver; });
}

double mean_reduction_pct(double baseline, double value) { return 100.0 * (baseline - value) / baseline; }

SummaryStats summarize(const std::vector<RunRecord> &records)
{
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> finals;
    std::map<std::pair<std::string, std::string>, int> failures;
    for (const RunRecord &r : records)
    {
        const auto key = std::make_pair(r.task, r.solver);
        if (!finals.count(key) && !failures.count(key))
            order.push_back(key);
        if (r.ok())
            finals[key].push_back(r.final_cost);
        else
            ++failures[key];
    }

    SummaryStats stats;
    for (const auto &key : order)
    {
        const auto it = finals.find(key);
        if (it == finals.end() || it->second.empty())
            continue; // all runs failed: reported as a missing group
        const std::vector<double> &v = it->second;
        GroupStats g;
        g.task = key.first;
        g.solver = key.second;
        g.count = static_cast<int>(v.size());
        g.failed = failures.count(key) ? failures.at(key) : 0;
        double sum = 0.0;
        for (double x : v)
            sum += x;
        g.mean = sum / g.count;
        // Deviations from the first sample, so identical finals give exactly 0.
        double shift_sum = 0.0, shift_sq = 0.0;
        for (double x : v)
        {
            shift_sum += x - v.front();
            shift_sq += (x - v.front()) * (x - v.front());
        }
        const double shift_mean = shift_sum / g.count;
        g.std = std::sqrt(std::max(0.0, shift_sq / g.count - shift_mean * shift_mean));
        g.min = *std::min_element(v.begin(), v.end());
        g.max = *std::max_element(v.begin(), v.end());
        stats.groups.push_back(std::move(g));
    }
    for (GroupStats &g : stats.groups)
    {
        if (g.solver != "vanilla" && stats.contains(g.task, "vanilla"))
            g.dmean_vs_vanilla_pct = mean_reduction_pct(stats.at(g.task, "vanilla").mean, g.mean);
        if (g.solver == "mme" && stats.contains(g.task, "me"))
            g.dmean_vs_me_pct = mean_reduction_pct(stats.at(g.task, "me").mean, g.mean);
    }
    return stats;
}

std::optional<OutputFormat> parse_format(const std::string &name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "json")
        return OutputFormat::json;
    return std::nullopt;
}

OutputFormat format_from_path(const std::filesystem::path &path, OutputFormat fallback)
{
    const std::string ext = path.extension().string();
    if (ext == ".csv")
        return OutputFormat::csv;
    if (ext == ".json")
        return OutputFormat::json;
    return fallback;
}

std::filesystem::path summary_path_for(const std::filesystem::path &csv_path)
{
    std::filesystem::path p = csv_path;
    p.replace_extension();
    p += ".summary.csv";
    return p;
}

void emit(const std::vector<RunRecord> &records, const SummaryStats &stats, OutputFormat format,
          const std::filesystem::path &path, const EmitOptions &options)
{
    for (const RunRecord &r : records)
        check_record(r);

    if (format == OutputFormat::csv)
    {
        std::ostringstream out;
        out << "task,solver,seed,iter,min_cost\n";
        for (const RunRecord &r : records)
        {
            for (std::size_t i = 0; i < r.trace.size(); ++i)
                out << r.task << ',' << r.solver << ',' << r.seed << ',' << i << ',' << format_double(r.trace[i])
                    << '\n';
        }
        write_atomically(path, out.str());
        write_atomically(summary_path_for(path), summary_csv(stats));
        return;
    }

    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["std_kind"] = "population";
    if (options.include_timing)
        doc["generated_at"] = utc_timestamp();
    json recs = json::array();
    for (const RunRecord &r : records)
    {
        json j = {{"task", r.task},
                  {"solver", r.solver},
                  {"seed", r.seed},
                  {"status", r.status},
                  {"final_cost", r.ok() ? json(r.final_cost) : json(nullptr)},
                  {"trace", r.trace},
                  {"modes", r.modes},
                  {"alpha", r.alpha},
                  {"resample_every", r.resample_every}};
        if (!r.error.empty())
            j["error"] = r.error;
        if (options.include_timing)
            j["wall_time_s"] = r.wall_time_s;
        recs.push_back(std::move(j));
    }
    doc["records"] = std::move(recs);
    doc["summary"] = summary_json(stats);
    write_atomically(path, doc.dump(2) + "\n");
}

void write_summary(const SummaryStats &stats, OutputFormat format, const std::filesystem::path &path)
{
    if (format == OutputFormat::csv)
    {
        write_atomically(path, summary_csv(stats));
        return;
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["std_kind"] = "population";
    doc["summary"] = summary_json(stats);
    write_atomically(path, doc.dump(2) + "\n");
}

std::string format_summary_table(const SummaryStats &stats)
{
    std::ostringstream out;
    out << std::left << std::setw(12) << "task" << std::setw(9) << "solver" << std::right << std::setw(5) << "n"
        << std::setw(12) << "mean" << std::setw(12) << "std" << std::setw(12) << "min" << std::setw(12) << "max"
        << std::setw(12) << "d%vanilla" << std::setw(10) << "d%me" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const GroupStats &g : stats.groups)
    {
        out << std::left << std::setw(12) << g.task << std::setw(9) << g.solver << std::right << std::setw(5)
            << g.count << std::setw(12) << g.mean << std::setw(12) << g.std << std::setw(12) << g.min << std::setw(12)
            << g.max;
        std::ostringstream a, b;
        a << std::fixed << std::setprecision(2);
        b << std::fixed << std::setprecision(2);
        if (g.dmean_vs_vanilla_pct)
            a << *g.dmean_vs_vanilla_pct;
        if (g.dmean_vs_me_pct)
            b << *g.dmean_vs_me_pct;
        out << std::setw(12) << a.str() << std::setw(10) << b.str() << '\n';
    }
    return out.str();
}

std::vector<RunRecord> read_records_json(const std::filesystem::path &path)
{
    json doc;
    try
    {
        doc = json::parse(read_file(path));
    }
    catch (const json::exception &e)
    {
        throw Error("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != kSchemaVersion)
        throw Error("'" + path.string() + "' has an unsupported schema_version");

    std::vector<RunRecord> records;
    try
    {
        for (const json &j : doc.at("records"))
        {
            RunRecord r;
            r.task = j.at("task").get<std::string>();
            r.solver = j.at("solver").get<std::string>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.status = j.at("status").get<std::string>();
            r.final_cost = j.at("final_cost").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                        : j.at("final_cost").get<double>();
            r.trace = j.at("trace").get<std::vector<double>>();
            r.modes = j.at("modes").get<int>();
            r.alpha = j.at("alpha").get<double>();
            r.resample_every = j.at("resample_every").get<int>();
            r.error = j.value("error", "");
            r.wall_time_s = j.value("wall_time_s", 0.0);
            check_record(r);
            records.push_back(std::move(r));
        }
    }
    catch (const json::exception &e)
    {
        throw Error("'" + path.string() + "' has malformed records: " + e.what());
    }
    return records;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path &path)
{
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "task,solver,seed,iter,min_cost")
        throw Error("'" + path.string() + "' does not start with the trace header");

    std::vector<RunRecord> records;
    int line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 5)
            throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
        try
        {
            const std::uint64_t seed = std::stoull(f[2]);
            const std::size_t iter = std::stoull(f[3]);
            const double cost = parse_double(f[4]);
            if (records.empty() || records.back().task != f[0] || records.back().solver != f[1] ||
                records.back().seed != seed || iter == 0)
            {
                RunRecord r;
                r.task = f[0];
                r.solver = f[1];
                r.seed = seed;
                records.push_back(std::move(r));
            }
            RunRecord &r = records.back();
            if (iter != r.trace.size())
                throw Error("iterations out of order");
            r.trace.push_back(cost);
            r.final_cost = cost;
        }
        catch (const std::exception &e)
        {
            throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    for (const RunRecord &r : records)
        check_record(r);
    return records;
}

std::vector<RunRecord> read_records(const std::filesystem::path &path)
{
    return format_from_path(path, OutputFormat::json) == OutputFormat::csv ? read_records_csv(path)
                                                                            : read_records_json(path);
}

std::vector<std::uint64_t> parse_seed_list(const std::string &text)
{
    std::vector<std::uint64_t> seeds;
    auto parse_u64 = [&](const std::string &s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw ContractError("invalid seed specification '" + text + "'");
        return std::stoull(s);
    };
    if (text.find(',') != std::string::npos)
    {
        for (const std::string &part : split(text, ','))
            seeds.push_back(parse_u64(part));
        return seeds;
    }
    if (const auto dash = text.find('-'); dash != std::string::npos)
    {
        const std::uint64_t lo = parse_u64(text.substr(0, dash));
        const std::uint64_t hi = parse_u64(text.substr(dash + 1));
        if (hi < lo)
            throw ContractError("invalid seed range '" + text + "'");
        for (std::uint64_t s = lo; s <= hi; ++s)
            seeds.push_back(s);
        return seeds;
    }
    const std::uint64_t count = parse_u64(text);
    for (std::uint64_t s = 0; s < count; ++s)
        seeds.push_back(s);
    return seeds;
}

} // namespace mddp
