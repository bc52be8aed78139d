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

#ifndef MDDP_BENCH_HPP
#define MDDP_BENCH_HPP

#include "mddp/task.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mddp
{

/// Output of one solver run on one seed.
struct RunRecord
{
    std::string task;
    std::string solver;
    std::uint64_t seed = 0;
    double final_cost = 0.0;
    std::vector<double> trace; // min cost per iteration, entry 0 = initial cost
    double wall_time_s = 0.0;
    int modes = 1;
    double alpha = 0.0;
    int resample_every = 0;
    std::string status = "ok"; // "ok" or "failed"
    std::string error;

    bool ok() const { return status == "ok"; }
};

/// A record whose trace increases somewhere.
class InvariantError : public Error
{
public:
    using Error::Error;
};

/// Summary lookup for a (task, solver) pair without successful records.
class MissingGroupError : public Error
{
public:
    using Error::Error;
};

struct SolverOverrides
{
    std::optional<double> alpha;
    std::optional<int> modes;
    std::optional<int> resample_every;
    std::optional<int> iterations;
};

const std::vector<std::string> &solver_ids(); // vanilla, me, mme

bool is_non_increasing(const std::vector<double> &trace);

/// Throws InvariantError when a successful record's trace increases.
void check_record(const RunRecord &record);

/// Run one solver on one seed. Solver failures are captured in the record.
RunRecord run_single(const TaskDefinition &task, const std::string &solver, std::uint64_t seed);

/// One record per seed, in seed order. The deterministic vanilla solver runs
/// once and its result is reported for every seed. `jobs` > 1 runs seeds on
/// worker threads.
std::vector<RunRecord> run_experiment(const std::filesystem::path &config, const std::string &solver,
                                      const std::vector<std::uint64_t> &seeds, const SolverOverrides &overrides = {},
                                      int jobs = 1);

struct GroupStats
{
    std::string task;
    std::string solver;
    int count = 0;
    int failed = 0;
    double mean = 0.0;
    double std = 0.0; // population
    double min = 0.0;
    double max = 0.0;
    std::optional<double> dmean_vs_vanilla_pct;
    std::optional<double> dmean_vs_me_pct;
};

struct SummaryStats
{
    std::vector<GroupStats> groups; // first-appearance order

    /// Throws MissingGroupError when absent.
    const GroupStats &at(const std::string &task, const std::string &solver) const;
    bool contains(const std::string &task, const std::string &solver) const;
};

/// 100 * (baseline - value) / baseline; positive means a reduction.
double mean_reduction_pct(double baseline, double value);

/// Statistics over the successful final costs of every (task, solver) group.
SummaryStats summarize(const std::vector<RunRecord> &records);

enum class OutputFormat
{
    csv,
    json,
};

std::optional<OutputFormat> parse_format(const std::string &name);
OutputFormat format_from_path(const std::filesystem::path &path, OutputFormat fallback);

struct EmitOptions
{
    bool include_timing = true; // wall times and the generation timestamp
};

/// JSON: one document with records and summary. CSV: traces at `path`
/// (header task,solver,seed,iter,min_cost) and the summary table next to it
/// at summary_path_for(path). Files are written atomically.
void emit(const std::vector<RunRecord> &records, const SummaryStats &stats, OutputFormat format,
          const std::filesystem::path &path, const EmitOptions &options = {});

std::filesystem::path summary_path_for(const std::filesystem::path &csv_path);

void write_summary(const SummaryStats &stats, OutputFormat format, const std::filesystem::path &path);
std::string format_summary_table(const SummaryStats &stats);

std::vector<RunRecord> read_records_json(const std::filesystem::path &path);
/// Traces only: final cost is the last trace entry; run metadata is not in the CSV.
std::vector<RunRecord> read_records_csv(const std::filesystem::path &path);
std::vector<RunRecord> read_records(const std::filesystem::path &path);

/// "16" -> 0..15, "3-7" -> 3..7, "1,4,9" -> {1, 4, 9}.
std::vector<std::uint64_t> parse_seed_list(const std::string &text);

} // namespace mddp

#endif // MDDP_BENCH_HPP
