// Acceptance suite: one PASS/FAIL line per criterion.
//
//   r1nes_acceptance              all criteria
//   r1nes_acceptance --criterion 4

#include "r1nes/harness.hpp"
#include "r1nes/r1nes.hpp"
#include "r1nes/run.hpp"
#include "r1nes/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

using namespace r1nes;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        pass = pass && ok;
        if (!detail.empty())
            detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* format, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

std::string report_line(const oracle::OracleReport& r)
{
    return r.quantity + " err=" + fmt("%.3g", r.error) + " tol=" + fmt("%.3g", r.tolerance);
}

struct CellStats {
    int trials = 0;
    int successes = 0;
    int premature = 0;
    /// Failed runs count as +infinity.
    double median_evaluations = 0.0;
};

CellStats run_cell(Algorithm algorithm, const std::string& function, Eigen::Index d, int trials)
{
    const OptimizerConfig config = OptimizerConfig::defaults(algorithm, d);
    CellStats s;
    std::vector<double> evals;
    for (int t = 0; t < trials; ++t) {
        const auto problem = bench::make_problem(function, d, derive_seed(7000 + t, function));
        const std::uint64_t seed = derive_seed(derive_seed(9000 + t, to_string(algorithm)), function);
        RunRecord r;
        try {
            r = run(algorithm, problem, config, seed);
        } catch (const Error&) {
            r.success = false;
        }
        ++s.trials;
        s.successes += r.success;
        s.premature += r.premature_convergence;
        evals.push_back(r.success ? static_cast<double>(r.evaluations_to_target)
                                  : std::numeric_limits<double>::infinity());
    }
    s.median_evaluations = harness::median(evals);
    return s;
}

std::string describe(const std::string& label, const CellStats& s)
{
    return label + " " + std::to_string(s.successes) + "/" + std::to_string(s.trials) + " (median " +
           (std::isfinite(s.median_evaluations) ? fmt("%.0f", s.median_evaluations) : std::string("inf")) + ")";
}

Outcome natural_gradient_exactness()
{
    Outcome o;
    const auto dense = oracle::check_natural_gradient_dense(101, 100, 1e-10);
    const auto closed = oracle::check_natural_lambda_closed_form(102, 100, 1e-12);
    o.require(dense.pass, report_line(dense));
    o.require(closed.pass, report_line(closed));
    return o;
}

Outcome fisher_correctness()
{
    Outcome o;
    const RankOneGaussian dist(Vector::Zero(3), 0.3, (Vector(3) << 0.8, -1.1, 0.4).finished());
    const auto r = oracle::check_fisher_monte_carlo(dist, 201, 1000000, 3.0);
    o.require(r.pass, report_line(r));
    return o;
}

Outcome density_oracles()
{
    Outcome o;
    const auto density = oracle::check_log_density(301, 100, 1e-9);
    const auto grad = oracle::check_plain_grad(302, 100, 1e-5, 1e-5);
    o.require(density.pass, report_line(density));
    o.require(grad.pass, report_line(grad));
    Rng rng(303);
    double worst = 0.0;
    bool ok = true;
    for (Eigen::Index d : {2, 3, 4}) {
        const RankOneGaussian dist = oracle::random_state(d, rng);
        const auto cov = oracle::check_sampling_covariance(dist, 304 + d, 100000, 0.05);
        worst = std::max(worst, cov.error);
        ok = ok && cov.pass;
    }
    o.require(ok, "sampling covariance d=2..4 worst=" + fmt("%.3g", worst) + " tol=0.05");
    return o;
}

Outcome cigar_diagnostic()
{
    Outcome o;
    const Eigen::Index d = 32;
    const OptimizerConfig config = OptimizerConfig::defaults(Algorithm::r1nes, d);
    std::vector<double> final_c;
    int monotone = 0;
    int solved = 0;
    for (int s = 0; s < 10; ++s) {
        const auto problem = bench::make_problem("cigar", d, 400 + s);
        const RunRecord r = run_r1nes(problem, config, 410 + s);
        solved += r.success;
        final_c.push_back(r.trace.back().c);

        // Monotone over the last half, judged on 10-generation block means.
        const std::size_t half = r.trace.size() / 2;
        std::vector<double> blocks;
        for (std::size_t b = half; b + 10 <= r.trace.size(); b += 10) {
            double sum = 0.0;
            for (std::size_t g = b; g < b + 10; ++g)
                sum += r.trace[g].lambda;
            blocks.push_back(sum / 10.0);
        }
        bool decreasing = blocks.size() >= 2;
        for (std::size_t k = 1; k < blocks.size(); ++k)
            decreasing = decreasing && blocks[k] < blocks[k - 1];
        monotone += decreasing;
    }
    const double med = harness::median(final_c);
    const double target = std::log(1000.0);
    o.require(std::abs(med - target) <= 0.5, "median final c " + fmt("%.3f", med) + " vs log(1000) = " +
                                                 fmt("%.3f", target) + " +- 0.5");
    o.require(monotone == 10, "lambda decreasing over last half in " + std::to_string(monotone) + "/10 runs");
    o.detail += "; solved " + std::to_string(solved) + "/10";
    return o;
}

Outcome non_separable_capability()
{
    Outcome o;
    for (Eigen::Index d : {8, 16}) {
        const CellStats r1 = run_cell(Algorithm::r1nes, "rotated_rosenbrock", d, 20);
        const CellStats sn = run_cell(Algorithm::snes, "rotated_rosenbrock", d, 20);
        const std::string tag = "rotated_rosenbrock d=" + std::to_string(d);
        o.require(r1.successes >= 14, describe("r1nes " + tag, r1) + " needs >= 14");
        o.require(sn.successes <= 2, describe("snes " + tag, sn) + " needs <= 2");
    }
    const CellStats r1 = run_cell(Algorithm::r1nes, "rosenbrock", 16, 20);
    const CellStats sn = run_cell(Algorithm::snes, "rosenbrock", 16, 20);
    o.require(r1.median_evaluations < sn.median_evaluations,
              describe("r1nes rosenbrock d=16", r1) + " vs " + describe("snes", sn));
    return o;
}

Outcome separable_parity()
{
    Outcome o;
    for (Algorithm a : {Algorithm::snes, Algorithm::r1nes}) {
        for (const char* f : {"sphere", "ellipsoid"}) {
            std::string solved;
            std::string unsolved;
            for (Eigen::Index d : {2, 4, 8, 16, 32}) {
                const CellStats s = run_cell(a, f, d, 20);
                // Solved: the median run reaches the target.
                const std::string item = std::to_string(d) + ":" + std::to_string(s.successes);
                (std::isfinite(s.median_evaluations) ? solved : unsolved) += " " + item;
            }
            o.require(unsolved.empty(), to_string(a) + " " + f + " solved{" + solved + " } unsolved{" + unsolved + " }");
        }
    }
    for (const char* f : {"rotated_ellipsoid", "tablet"}) {
        const CellStats s = run_cell(Algorithm::r1nes, f, 32, 20);
        const double failed = static_cast<double>(s.trials - s.successes) / s.trials;
        o.require(failed >= 0.9, std::string("r1nes ") + f + " d=32 failed " + fmt("%.2f", failed) +
                                     " (premature " + fmt("%.2f", static_cast<double>(s.premature) / s.trials) +
                                     ") needs >= 0.90");
    }
    return o;
}

Outcome scaling()
{
    Outcome o;
    const std::vector<Eigen::Index> large = {64, 128, 256, 512};
    for (Algorithm a : {Algorithm::r1nes, Algorithm::snes}) {
        const auto t = harness::timing_probe(a, large, 7);
        o.require(t.slope >= 0.8 && t.slope <= 1.3, to_string(a) + " slope " + fmt("%.3f", t.slope) + " in [0.8, 1.3]");
    }
    const auto x = harness::timing_probe(Algorithm::xnes, {8, 16, 32, 64}, 7);
    o.require(x.slope >= 2.3, "xnes slope " + fmt("%.3f", x.slope) + " >= 2.3");
    const std::vector<harness::TimingRow> upper(x.rows.begin() + 1, x.rows.end());
    const std::vector<harness::TimingRow> last(x.rows.end() - 2, x.rows.end());
    o.detail += "; xnes slope over 16..64 " + fmt("%.3f", harness::loglog_slope(upper)) + ", over 32..64 " +
                fmt("%.3f", harness::loglog_slope(last));
    return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (rel.find("timing") != std::string::npos)
            continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[rel] = ss.str();
    }
    return files;
}

Outcome determinism()
{
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "r1nes-acceptance-determinism";
    const std::string text = R"({"algorithms": ["r1nes", "snes", "xnes"], "functions": ["sphere", "rotated_rosenbrock", "tablet"],
        "dimensions": [2, 5], "trials": 4, "budget_per_dimension": 3000, "base_seed": 2024, "write_traces": true,
        "output_dir": ")" + dir.generic_string() + "\"}";
    const harness::Campaign campaign = harness::parse_campaign(text, "determinism");

    fs::remove_all(dir);
    harness::run_campaign(campaign, 3);
    const auto first = snapshot(dir);
    fs::remove_all(dir);
    harness::run_campaign(campaign, 1);
    const auto second = snapshot(dir);
    fs::remove_all(dir);

    o.require(!first.empty() && first == second,
              std::to_string(first.size()) + " non-timing files compared byte for byte");
    return o;
}

bool same_state(const RankOneGaussian& a, const RankOneGaussian& b)
{
    return a.log_scale() == b.log_scale() && (a.mean().array() == b.mean().array()).all() &&
           (a.direction().array() == b.direction().array()).all();
}

Outcome monotone_invariance()
{
    Outcome o;
    const Eigen::Index d = 8;
    const auto base = bench::make_problem("sphere", d, 901);
    const auto exp_f = bench::Problem::from_fitness(
        "exp(f)", d, [&base](const Vector& x) { bench::Evaluator e(base); return std::exp(e(x)); }, 0.0);
    const auto affine = bench::Problem::from_fitness(
        "2f+7", d, [&base](const Vector& x) { bench::Evaluator e(base); return 2.0 * e(x) + 7.0; }, 0.0);

    const OptimizerConfig config = OptimizerConfig::defaults(Algorithm::r1nes, d);
    Rng init(902);
    const RankOneGaussian start = r1nes_initial_state(config, d, init);
    Rng r0(903), r1(903), r2(903);
    bench::Evaluator e0(base), e1(exp_f), e2(affine);
    RankOneGaussian s0 = start, s1 = start, s2 = start;
    int generations = 0;
    bool identical = true;
    double best = -std::numeric_limits<double>::infinity();
    while (best < base.target_fitness() && generations < 20000) {
        const auto step = r1nes_step(s0, config, r0, e0);
        s0 = step.state;
        s1 = r1nes_step(s1, config, r1, e1).state;
        s2 = r1nes_step(s2, config, r2, e2).state;
        ++generations;
        best = std::max(best, *std::max_element(step.fitness.begin(), step.fitness.end()));
        if (!same_state(s0, s1) || !same_state(s0, s2)) {
            identical = false;
            break;
        }
    }
    o.require(identical, "bitwise identical states for " + std::to_string(generations) +
                             " generations under exp(f) and 2f+7");
    o.require(best >= base.target_fitness(), "run reached the target");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "natural-gradient exactness", natural_gradient_exactness},
        {2, "Fisher vs Monte-Carlo", fisher_correctness},
        {3, "density and gradient oracles", density_oracles},
        {4, "cigar diagnostic", cigar_diagnostic},
        {5, "non-separable capability", non_separable_capability},
        {6, "separable parity", separable_parity},
        {7, "cost scaling", scaling},
        {8, "determinism", determinism},
        {9, "monotone invariance", monotone_invariance},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only)
            continue;
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        failures += !outcome.pass;
        std::printf("%s %d %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
