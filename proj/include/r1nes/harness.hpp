#pragma once

// Experiment campaigns: every (algorithm, function, dimension) cell runs a
// fixed number of seeded trials. Results land in an output directory as
// line-delimited JSON run records, CSV summaries and (x, y, series) plot
// tables. Wall-clock figures go to separate files so every other output is
// a pure function of the campaign config.

#include "r1nes/optimizer_config.hpp"
#include "r1nes/run.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace r1nes::harness {

struct Campaign {
    std::vector<Algorithm> algorithms;
    std::vector<std::string> functions;
    std::vector<Eigen::Index> dimensions;
    int trials = 20;
    /// Evaluation budget per run is budget_per_dimension * d.
    std::int64_t budget_per_dimension = 10000;
    std::uint64_t base_seed = 0;
    std::filesystem::path output_dir = "campaign-out";
    /// xNES cells above d = 64 are refused unless set.
    bool force_xnes_high_dim = false;
    bool stop_on_stall = false;
    bool write_traces = false;
    bool nonzero_f_opt = false;
};

/// Strict JSON config; unknown keys are rejected. Errors carry the source
/// name and either the line/column of a syntax error or the offending field.
Campaign parse_campaign(const std::string& text, const std::string& source = "<config>");
Campaign load_campaign(const std::filesystem::path& path);

struct Cell {
    Algorithm algorithm;
    std::string function;
    Eigen::Index dimension;

    std::string label() const;
};

/// All cells in config order. Throws ConfigError for xNES above d = 64
/// without force_xnes_high_dim.
std::vector<Cell> expand_cells(const Campaign& campaign);

/// Seed of the optimizer stream for one trial; distinct for every
/// (algorithm, function, dimension, trial).
std::uint64_t run_seed(const Campaign& campaign, const Cell& cell, int trial);
/// Seed of the problem instance; shared by all algorithms for the same
/// (function, dimension, trial).
std::uint64_t problem_seed(const Campaign& campaign, const Cell& cell, int trial);

/// Digest over everything that determines a cell's results.
std::string cell_digest(const Campaign& campaign, const Cell& cell);

struct RunSummary {
    int trial = 0;
    std::uint64_t seed = 0;
    bool success = false;
    std::int64_t evaluations_to_target = -1;
    std::int64_t evaluations = 0;
    double best_fitness = 0.0;
    bool premature_convergence = false;
    std::string error;
    std::int64_t generations = 0;
    double final_lambda = 0.0;
    double final_c = 0.0;
    double seconds_per_evaluation = 0.0;  ///< not part of the JSON record
};

std::string to_record_line(const Cell& cell, const RunSummary& run);
RunSummary run_summary_from_line(const std::string& line);

struct CellSummary {
    Cell cell;
    int trials = 0;
    int successes = 0;
    /// Median evaluations-to-target over successful runs.
    std::optional<double> median_evaluations;
    double premature_fraction = 0.0;
    double failure_fraction = 0.0;
    /// At least 90% of runs ended without reaching the target.
    bool suppressed = false;
    double median_seconds_per_evaluation = 0.0;
};

CellSummary summarize_cell(const Cell& cell, const std::vector<RunSummary>& runs);

/// Median of the values; the mean of the middle pair for even counts.
double median(std::vector<double> values);

struct CampaignResult {
    int cells_total = 0;
    int cells_run = 0;
    int cells_skipped = 0;
    int runs_executed = 0;
};

/// Runs every cell not already completed in the output directory, then
/// writes the summaries. workers <= 0 means worker_count().
CampaignResult run_campaign(const Campaign& campaign, int workers = 0);

/// Rebuilds summary.csv, plot_evals.csv, timing_summary.csv and
/// plot_timing.csv from the cell records of a campaign directory.
std::vector<CellSummary> summarize(const std::filesystem::path& dir);

/// R1NES_WORKERS when set to a positive integer, else hardware concurrency.
int worker_count();

struct TimingRow {
    Eigen::Index dimension = 0;
    double seconds_per_evaluation = 0.0;
};

struct TimingTable {
    Algorithm algorithm = Algorithm::r1nes;
    std::vector<TimingRow> rows;
    double slope = 0.0;  ///< least-squares slope of log time against log d
};

/// Median per-evaluation cost of a generation (sampling, update, and a
/// sphere evaluation) for each dimension, after warmup generations.
TimingTable timing_probe(Algorithm algorithm, const std::vector<Eigen::Index>& dimensions, int samples);

double loglog_slope(const std::vector<TimingRow>& rows);

} // namespace r1nes::harness
