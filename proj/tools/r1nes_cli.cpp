// r1nes: experiment driver.
//
//   r1nes run <campaign.json> [--workers N]
//   r1nes summarize <dir>
//   r1nes timing <algorithm> <d1,d2,...> [--samples N]
//   r1nes trace <algorithm> <function> <dimension> [--seed S] [--budget N]
//   r1nes manifest <d1,d2,...> [--seed S]
//   r1nes validate [--seed S]

#include "r1nes/benchmarks.hpp"
#include "r1nes/harness.hpp"
#include "r1nes/run.hpp"
#include "r1nes/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace r1nes;

std::vector<Eigen::Index> parse_dimensions(const std::string& text)
{
    std::vector<Eigen::Index> dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        long long d = 0;
        try {
            d = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || d < 2)
            throw ConfigError("bad dimension '" + item + "' (expected integers >= 2, comma separated)");
        dims.push_back(static_cast<Eigen::Index>(d));
        pos = comma + 1;
    }
    return dims;
}

int cmd_run(const std::string& path, int workers)
{
    const harness::Campaign campaign = harness::load_campaign(path);
    const harness::CampaignResult result = harness::run_campaign(campaign, workers);
    std::cout << "cells: " << result.cells_total << " total, " << result.cells_run << " run, "
              << result.cells_skipped << " already complete; " << result.runs_executed << " runs\n"
              << "output: " << campaign.output_dir.string() << "\n";
    return 0;
}

int cmd_summarize(const std::string& dir)
{
    for (const auto& s : harness::summarize(dir)) {
        std::printf("%-6s %-18s d=%-4lld %2d/%-2d  median=%s  premature=%.2f%s\n",
                    to_string(s.cell.algorithm).c_str(), s.cell.function.c_str(),
                    static_cast<long long>(s.cell.dimension), s.successes, s.trials,
                    s.median_evaluations ? std::to_string(static_cast<long long>(*s.median_evaluations)).c_str() : "-",
                    s.premature_fraction, s.suppressed ? "  (suppressed)" : "");
    }
    return 0;
}

int cmd_timing(const std::string& algorithm, const std::string& dims, int samples)
{
    const harness::TimingTable table = harness::timing_probe(parse_algorithm(algorithm), parse_dimensions(dims), samples);
    std::cout << "dimension,seconds_per_evaluation\n";
    for (const auto& row : table.rows)
        std::printf("%lld,%.6e\n", static_cast<long long>(row.dimension), row.seconds_per_evaluation);
    std::printf("# log-log slope %.3f\n", table.slope);
    return 0;
}

int cmd_trace(const std::string& algorithm, const std::string& function, Eigen::Index d, std::uint64_t seed,
              std::int64_t budget)
{
    const Algorithm algo = parse_algorithm(algorithm);
    const bench::Problem problem = bench::make_problem(function, d, derive_seed(seed, "problem"));
    OptimizerConfig config = OptimizerConfig::defaults(algo, d);
    if (budget >= 0)
        config.max_evaluations = budget;
    const RunRecord record = run(algo, problem, config, seed,
                                 [](const GenerationTrace& t) { std::cout << to_trace_line(t) << "\n"; });
    std::cerr << (record.success ? "target reached after " : "target missed after ")
              << (record.success ? record.evaluations_to_target : record.evaluations) << " evaluations\n";
    return record.success ? 0 : 2;
}

int cmd_manifest(const std::string& dims, std::uint64_t seed)
{
    for (Eigen::Index d : parse_dimensions(dims))
        for (const auto& problem : bench::make_suite(d, seed))
            std::cout << bench::manifest_line(problem) << "\n";
    return 0;
}

int cmd_validate(std::uint64_t seed)
{
    int failures = 0;
    for (const auto& report : oracle::run_oracle_suite(seed)) {
        std::cout << oracle::to_string(report) << "\n";
        failures += report.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank-one natural evolution strategy experiments"};
    app.require_subcommand(1);

    std::string config_path;
    int workers = 0;
    auto* run_cmd = app.add_subcommand("run", "run (or resume) a campaign");
    run_cmd->add_option("config", config_path, "campaign JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--workers", workers, "worker threads (default: R1NES_WORKERS or core count)");

    std::string dir;
    auto* summarize_cmd = app.add_subcommand("summarize", "rebuild summaries of a campaign directory");
    summarize_cmd->add_option("dir", dir, "campaign output directory")->required()->check(CLI::ExistingDirectory);

    std::string algorithm;
    std::string dims;
    int samples = 5;
    auto* timing_cmd = app.add_subcommand("timing", "per-evaluation cost against dimension");
    timing_cmd->add_option("algorithm", algorithm, "r1nes, snes or xnes")->required();
    timing_cmd->add_option("dimensions", dims, "comma separated, e.g. 64,128,256")->required();
    timing_cmd->add_option("--samples", samples, "timed repetitions per dimension")->check(CLI::PositiveNumber);

    std::string function;
    long long dimension = 0;
    std::uint64_t seed = 1;
    long long budget = -1;
    auto* trace_cmd = app.add_subcommand("trace", "print one run's generation trace as JSON lines");
    trace_cmd->add_option("algorithm", algorithm)->required();
    trace_cmd->add_option("function", function)->required();
    trace_cmd->add_option("dimension", dimension)->required()->check(CLI::Range(2LL, 1LL << 20));
    trace_cmd->add_option("--seed", seed);
    trace_cmd->add_option("--budget", budget, "evaluation budget (default 10000 * d)");

    auto* manifest_cmd = app.add_subcommand("manifest", "print the benchmark suite instances");
    manifest_cmd->add_option("dimensions", dims)->required();
    manifest_cmd->add_option("--seed", seed);

    auto* validate_cmd = app.add_subcommand("validate", "run the numerical oracle checks");
    validate_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd)
            return cmd_run(config_path, workers);
        if (*summarize_cmd)
            return cmd_summarize(dir);
        if (*timing_cmd)
            return cmd_timing(algorithm, dims, samples);
        if (*trace_cmd)
            return cmd_trace(algorithm, function, static_cast<Eigen::Index>(dimension), seed, budget);
        if (*manifest_cmd)
            return cmd_manifest(dims, seed);
        if (*validate_cmd)
            return cmd_validate(seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
