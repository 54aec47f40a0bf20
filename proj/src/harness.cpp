#include "r1nes/harness.hpp"

#include "r1nes/baselines.hpp"
#include "r1nes/benchmarks.hpp"
#include "r1nes/r1nes.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace r1nes::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Shortest exact decimal form.
std::string number(double value)
{
    return json(value).dump();
}

[[noreturn]] void field_error(const std::string& source, const std::string& field, const std::string& message)
{
    throw ConfigError(source + ": field '" + field + "': " + message);
}

void write_atomically(const fs::path& path, const std::string& content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << content;
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json campaign_to_json(const Campaign& c)
{
    json j;
    std::vector<std::string> algorithms;
    for (Algorithm a : c.algorithms)
        algorithms.push_back(to_string(a));
    j["algorithms"] = algorithms;
    j["functions"] = c.functions;
    j["dimensions"] = c.dimensions;
    j["trials"] = c.trials;
    j["budget_per_dimension"] = c.budget_per_dimension;
    j["base_seed"] = c.base_seed;
    j["output_dir"] = c.output_dir.string();
    j["force_xnes_high_dim"] = c.force_xnes_high_dim;
    j["stop_on_stall"] = c.stop_on_stall;
    j["write_traces"] = c.write_traces;
    j["nonzero_f_opt"] = c.nonzero_f_opt;
    return j;
}

fs::path cell_path(const fs::path& dir, const Campaign& campaign, const Cell& cell)
{
    return dir / "cells" / (cell.label() + "_" + cell_digest(campaign, cell) + ".jsonl");
}

fs::path timing_path(const fs::path& dir, const Campaign& campaign, const Cell& cell)
{
    return dir / "cells" / (cell.label() + "_" + cell_digest(campaign, cell) + ".timing.csv");
}

RunSummary execute_trial(const Campaign& campaign, const Cell& cell, int trial)
{
    bench::SuiteOptions options;
    options.nonzero_f_opt = campaign.nonzero_f_opt;
    const bench::Problem problem =
        bench::make_problem(cell.function, cell.dimension, problem_seed(campaign, cell, trial), options);

    OptimizerConfig config = OptimizerConfig::defaults(cell.algorithm, cell.dimension);
    config.max_evaluations = campaign.budget_per_dimension * cell.dimension;
    config.stop_on_stall = campaign.stop_on_stall;

    RunSummary s;
    s.trial = trial;
    s.seed = run_seed(campaign, cell, trial);

    std::string trace_text;
    TraceSink sink;
    if (campaign.write_traces)
        sink = [&trace_text](const GenerationTrace& t) { trace_text += to_trace_line(t) + "\n"; };

    try {
        const RunRecord record = run(cell.algorithm, problem, config, s.seed, sink);
        s.success = record.success;
        s.evaluations_to_target = record.evaluations_to_target;
        s.evaluations = record.evaluations;
        s.best_fitness = record.best_fitness;
        s.premature_convergence = record.premature_convergence;
        s.generations = static_cast<std::int64_t>(record.trace.size());
        if (!record.trace.empty()) {
            s.final_lambda = record.trace.back().lambda;
            s.final_c = record.trace.back().c;
        }
        s.seconds_per_evaluation = record.seconds_per_evaluation;
    } catch (const Error& e) {
        s.error = e.what();
    }

    if (campaign.write_traces) {
        const fs::path trace_file =
            campaign.output_dir / "traces" / (cell.label() + "_t" + std::to_string(trial) + ".jsonl");
        write_atomically(trace_file, trace_text);
    }
    return s;
}

} // namespace

std::string Cell::label() const
{
    return to_string(algorithm) + "_" + function + "_d" + std::to_string(dimension);
}

Campaign parse_campaign(const std::string& text, const std::string& source)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (!j.is_object())
        throw ConfigError(source + ": top level must be an object");

    static const std::set<std::string> known = {
        "algorithms",  "functions",           "dimensions",    "trials",       "budget_per_dimension",
        "base_seed",   "output_dir",          "force_xnes_high_dim", "stop_on_stall", "write_traces",
        "nonzero_f_opt",
    };
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key))
            field_error(source, key, "unknown field");
    }

    Campaign c;
    auto string_list = [&](const char* field) {
        if (!j.contains(field) || !j[field].is_array())
            field_error(source, field, "required list of names");
        std::vector<std::string> out;
        for (const auto& item : j[field]) {
            if (!item.is_string())
                field_error(source, field, "entries must be strings");
            out.push_back(item.get<std::string>());
        }
        if (out.empty())
            field_error(source, field, "must not be empty");
        return out;
    };

    for (const auto& name : string_list("algorithms")) {
        try {
            c.algorithms.push_back(parse_algorithm(name));
        } catch (const ConfigError& e) {
            field_error(source, "algorithms", e.what());
        }
    }
    const auto& all = bench::all_function_names();
    for (const auto& name : string_list("functions")) {
        if (std::find(all.begin(), all.end(), name) == all.end())
            field_error(source, "functions", "unknown benchmark function '" + name + "'");
        c.functions.push_back(name);
    }

    if (!j.contains("dimensions") || !j["dimensions"].is_array() || j["dimensions"].empty())
        field_error(source, "dimensions", "required non-empty list of integers");
    for (const auto& item : j["dimensions"]) {
        if (!item.is_number_integer() || item.get<long long>() < 2)
            field_error(source, "dimensions", "entries must be integers >= 2");
        c.dimensions.push_back(static_cast<Eigen::Index>(item.get<long long>()));
    }

    auto integer = [&](const char* field, long long lowest, long long fallback) {
        if (!j.contains(field))
            return fallback;
        if (!j[field].is_number_integer() || j[field].get<long long>() < lowest)
            field_error(source, field, "must be an integer >= " + std::to_string(lowest));
        return j[field].get<long long>();
    };
    auto boolean = [&](const char* field) {
        if (!j.contains(field))
            return false;
        if (!j[field].is_boolean())
            field_error(source, field, "must be true or false");
        return j[field].get<bool>();
    };

    c.trials = static_cast<int>(integer("trials", 1, 20));
    c.budget_per_dimension = integer("budget_per_dimension", 0, 10000);
    if (j.contains("base_seed")) {
        if (!j["base_seed"].is_number_unsigned())
            field_error(source, "base_seed", "must be a non-negative integer");
        c.base_seed = j["base_seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty())
            field_error(source, "output_dir", "must be a non-empty path");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    c.force_xnes_high_dim = boolean("force_xnes_high_dim");
    c.stop_on_stall = boolean("stop_on_stall");
    c.write_traces = boolean("write_traces");
    c.nonzero_f_opt = boolean("nonzero_f_opt");
    return c;
}

Campaign load_campaign(const fs::path& path)
{
    return parse_campaign(read_file(path), path.string());
}

std::vector<Cell> expand_cells(const Campaign& campaign)
{
    std::vector<Cell> cells;
    for (Algorithm a : campaign.algorithms) {
        for (const auto& f : campaign.functions) {
            for (Eigen::Index d : campaign.dimensions) {
                if (a == Algorithm::xnes && d > 64 && !campaign.force_xnes_high_dim)
                    throw ConfigError("xnes cell with d = " + std::to_string(d) +
                                      " refused (limit 64); set force_xnes_high_dim to run it");
                cells.push_back(Cell{a, f, d});
            }
        }
    }
    return cells;
}

std::uint64_t problem_seed(const Campaign& campaign, const Cell& cell, int trial)
{
    std::uint64_t s = derive_seed(campaign.base_seed, "problem");
    s = derive_seed(s, cell.function);
    s = derive_seed(s, static_cast<std::uint64_t>(cell.dimension));
    return derive_seed(s, static_cast<std::uint64_t>(trial));
}

std::uint64_t run_seed(const Campaign& campaign, const Cell& cell, int trial)
{
    std::uint64_t s = derive_seed(campaign.base_seed, to_string(cell.algorithm));
    s = derive_seed(s, cell.function);
    s = derive_seed(s, static_cast<std::uint64_t>(cell.dimension));
    return derive_seed(s, static_cast<std::uint64_t>(trial));
}

std::string cell_digest(const Campaign& campaign, const Cell& cell)
{
    std::ostringstream key;
    key << "v1|" << cell.label() << '|' << campaign.trials << '|' << campaign.budget_per_dimension << '|'
        << campaign.base_seed << '|' << campaign.stop_on_stall << '|' << campaign.nonzero_f_opt;
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << derive_seed(0, key.str());
    return out.str();
}

std::string to_record_line(const Cell& cell, const RunSummary& run)
{
    json j;
    j["algorithm"] = to_string(cell.algorithm);
    j["function"] = cell.function;
    j["dimension"] = cell.dimension;
    j["trial"] = run.trial;
    j["seed"] = run.seed;
    j["success"] = run.success;
    j["evaluations_to_target"] = run.evaluations_to_target;
    j["evaluations"] = run.evaluations;
    j["best_fitness"] = std::isfinite(run.best_fitness) ? json(run.best_fitness) : json(nullptr);
    j["premature_convergence"] = run.premature_convergence;
    j["generations"] = run.generations;
    j["final_lambda"] = run.final_lambda;
    j["final_c"] = std::isfinite(run.final_c) ? json(run.final_c) : json(nullptr);
    if (!run.error.empty())
        j["error"] = run.error;
    return j.dump();
}

RunSummary run_summary_from_line(const std::string& line)
{
    const json j = json::parse(line);
    RunSummary s;
    s.trial = j.at("trial").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.success = j.at("success").get<bool>();
    s.evaluations_to_target = j.at("evaluations_to_target").get<std::int64_t>();
    s.evaluations = j.at("evaluations").get<std::int64_t>();
    s.best_fitness = j.at("best_fitness").is_null() ? -INFINITY : j.at("best_fitness").get<double>();
    s.premature_convergence = j.at("premature_convergence").get<bool>();
    s.generations = j.at("generations").get<std::int64_t>();
    s.final_lambda = j.at("final_lambda").get<double>();
    s.final_c = j.at("final_c").is_null() ? NAN : j.at("final_c").get<double>();
    if (j.contains("error"))
        s.error = j.at("error").get<std::string>();
    return s;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return NAN;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1)
        return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

CellSummary summarize_cell(const Cell& cell, const std::vector<RunSummary>& runs)
{
    CellSummary s;
    s.cell = cell;
    s.trials = static_cast<int>(runs.size());
    std::vector<double> evals;
    std::vector<double> times;
    int premature = 0;
    for (const auto& r : runs) {
        if (r.success) {
            ++s.successes;
            evals.push_back(static_cast<double>(r.evaluations_to_target));
        }
        if (r.premature_convergence)
            ++premature;
        times.push_back(r.seconds_per_evaluation);
    }
    if (!evals.empty())
        s.median_evaluations = median(evals);
    if (s.trials > 0) {
        s.premature_fraction = static_cast<double>(premature) / s.trials;
        s.failure_fraction = static_cast<double>(s.trials - s.successes) / s.trials;
        s.median_seconds_per_evaluation = median(times);
    }
    s.suppressed = s.trials > 0 && s.failure_fraction >= 0.9;
    return s;
}

int worker_count()
{
    if (const char* env = std::getenv("R1NES_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CampaignResult run_campaign(const Campaign& campaign, int workers)
{
    const std::vector<Cell> cells = expand_cells(campaign);
    const fs::path dir = campaign.output_dir;
    fs::create_directories(dir / "cells");
    if (campaign.write_traces)
        fs::create_directories(dir / "traces");

    write_atomically(dir / "campaign.json", campaign_to_json(campaign).dump(2) + "\n");
    {
        std::string manifest;
        for (const auto& f : campaign.functions) {
            for (Eigen::Index d : campaign.dimensions) {
                for (int t = 0; t < campaign.trials; ++t) {
                    bench::SuiteOptions options;
                    options.nonzero_f_opt = campaign.nonzero_f_opt;
                    const Cell probe{Algorithm::r1nes, f, d};
                    manifest += bench::manifest_line(bench::make_problem(f, d, problem_seed(campaign, probe, t), options));
                    manifest += "\n";
                }
            }
        }
        write_atomically(dir / "manifest.jsonl", manifest);
    }

    CampaignResult result;
    result.cells_total = static_cast<int>(cells.size());
    std::vector<const Cell*> pending;
    for (const auto& cell : cells) {
        if (fs::exists(cell_path(dir, campaign, cell)))
            ++result.cells_skipped;
        else
            pending.push_back(&cell);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<int> runs{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size())
                return;
            const Cell& cell = *pending[i];
            try {
                std::string records;
                std::string timing = "trial,seconds_per_evaluation\n";
                for (int t = 0; t < campaign.trials; ++t) {
                    const RunSummary s = execute_trial(campaign, cell, t);
                    records += to_record_line(cell, s) + "\n";
                    timing += std::to_string(t) + "," + number(s.seconds_per_evaluation) + "\n";
                    runs.fetch_add(1);
                }
                write_atomically(timing_path(dir, campaign, cell), timing);
                write_atomically(cell_path(dir, campaign, cell), records);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };

    const int thread_count = std::max(1, std::min<int>(workers > 0 ? workers : worker_count(),
                                                       static_cast<int>(pending.size())));
    if (!pending.empty()) {
        std::vector<std::thread> threads;
        for (int k = 0; k < thread_count; ++k)
            threads.emplace_back(worker);
        for (auto& th : threads)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    result.cells_run = static_cast<int>(pending.size());
    result.runs_executed = runs.load();
    summarize(dir);
    return result;
}

std::vector<CellSummary> summarize(const fs::path& dir)
{
    const Campaign campaign = load_campaign(dir / "campaign.json");
    std::vector<CellSummary> summaries;
    for (const Cell& cell : expand_cells(campaign)) {
        const fs::path records = cell_path(dir, campaign, cell);
        if (!fs::exists(records))
            continue;
        std::vector<RunSummary> runs;
        std::istringstream lines(read_file(records));
        for (std::string line; std::getline(lines, line);) {
            if (!line.empty())
                runs.push_back(run_summary_from_line(line));
        }
        const fs::path timing = timing_path(dir, campaign, cell);
        if (fs::exists(timing)) {
            std::istringstream rows(read_file(timing));
            std::string row;
            std::getline(rows, row);
            while (std::getline(rows, row)) {
                const auto comma = row.find(',');
                const int trial = std::stoi(row.substr(0, comma));
                for (auto& r : runs)
                    if (r.trial == trial)
                        r.seconds_per_evaluation = std::stod(row.substr(comma + 1));
            }
        }
        summaries.push_back(summarize_cell(cell, runs));
    }

    std::string summary =
        "algorithm,function,dimension,trials,successes,median_evaluations,premature_fraction,failure_fraction,suppressed\n";
    std::string plot = "x,y,series\n";
    std::string timing = "algorithm,function,dimension,median_seconds_per_evaluation\n";
    std::string plot_timing = "x,y,series\n";
    for (const auto& s : summaries) {
        const std::string algo = to_string(s.cell.algorithm);
        summary += algo + "," + s.cell.function + "," + std::to_string(s.cell.dimension) + "," +
                   std::to_string(s.trials) + "," + std::to_string(s.successes) + "," +
                   (s.median_evaluations ? number(*s.median_evaluations) : std::string()) + "," +
                   number(s.premature_fraction) + "," + number(s.failure_fraction) + "," +
                   (s.suppressed ? "true" : "false") + "\n";
        if (s.median_evaluations && !s.suppressed)
            plot += std::to_string(s.cell.dimension) + "," + number(*s.median_evaluations) + "," + algo + "/" +
                    s.cell.function + "\n";
        timing += algo + "," + s.cell.function + "," + std::to_string(s.cell.dimension) + "," +
                  number(s.median_seconds_per_evaluation) + "\n";
        plot_timing += std::to_string(s.cell.dimension) + "," + number(s.median_seconds_per_evaluation) + "," +
                       algo + "/" + s.cell.function + "\n";
    }
    write_atomically(dir / "summary.csv", summary);
    write_atomically(dir / "plot_evals.csv", plot);
    write_atomically(dir / "timing_summary.csv", timing);
    write_atomically(dir / "plot_timing.csv", plot_timing);
    return summaries;
}

double loglog_slope(const std::vector<TimingRow>& rows)
{
    const double n = static_cast<double>(rows.size());
    if (rows.size() < 2)
        return NAN;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.dimension));
        const double y = std::log(r.seconds_per_evaluation);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

template <typename State, typename Step>
double time_generations(State initial, Step step, const OptimizerConfig& config, const bench::Problem& problem,
                        std::uint64_t seed)
{
    using clock = std::chrono::steady_clock;
    constexpr int warmup = 3;
    constexpr std::chrono::milliseconds minimum{25};

    Rng rng(seed);
    bench::Evaluator evaluator(problem);
    State state = std::move(initial);
    for (int g = 0; g < warmup; ++g)
        state = step(state, config, rng, evaluator).state;

    const std::int64_t start_evals = evaluator.evaluations();
    const auto start = clock::now();
    auto elapsed = clock::duration::zero();
    while (elapsed < minimum) {
        state = step(state, config, rng, evaluator).state;
        elapsed = clock::now() - start;
    }
    const double seconds = std::chrono::duration<double>(elapsed).count();
    return seconds / static_cast<double>(evaluator.evaluations() - start_evals);
}

} // namespace

TimingTable timing_probe(Algorithm algorithm, const std::vector<Eigen::Index>& dimensions, int samples)
{
    TimingTable table;
    table.algorithm = algorithm;
    for (Eigen::Index d : dimensions) {
        const bench::Problem problem = bench::make_problem("sphere", d, 1);
        OptimizerConfig config = OptimizerConfig::defaults(algorithm, d);
        std::vector<double> costs;
        for (int s = 0; s < std::max(1, samples); ++s) {
            const std::uint64_t seed = derive_seed(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(s));
            Rng init(seed);
            switch (algorithm) {
            case Algorithm::r1nes:
                costs.push_back(time_generations(r1nes_initial_state(config, d, init), r1nes_step, config, problem, seed));
                break;
            case Algorithm::snes:
                costs.push_back(time_generations(snes_initial_state(config, d, init), snes_step, config, problem, seed));
                break;
            case Algorithm::xnes:
                costs.push_back(time_generations(xnes_initial_state(config, d, init), xnes_step, config, problem, seed));
                break;
            }
        }
        table.rows.push_back({d, median(costs)});
    }
    table.slope = loglog_slope(table.rows);
    return table;
}

} // namespace r1nes::harness
