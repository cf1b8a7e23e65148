// ftsim: generate workloads, run scenarios and experiment sweeps, summarize results.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ftsim/ftsim.hpp>
#include <ftsim/io.hpp>

namespace fs = std::filesystem;
using namespace ftsim;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::vector<std::string> strategies;
    bool trace = false;
};

void add_common(CLI::App* cmd, Common& c, const char* config_help) {
    cmd->add_option("-c,--config", c.config, config_help);
    cmd->add_option("-s,--seed", c.seed, "Seed (overrides the config)");
    cmd->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--strategy", c.strategies,
                    "Strategies to run (FT_ALGO, CHECKPOINT_ONLY, REPLICATE_ONLY, NO_FT); repeatable");
    cmd->add_flag("--trace,!--no-trace", c.trace, "Write event traces");
}

std::vector<Strategy> pick(const std::vector<std::string>& names, const std::vector<Strategy>& fallback) {
    if (names.empty()) return fallback;
    std::vector<Strategy> out;
    for (const std::string& n : names) out.push_back(parse_strategy(n));
    return out;
}

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == '*' || ch == '/' || ch == ' ') ch = '_';
    }
    return s;
}

void write_traces(const fs::path& dir, const std::string& stem, const ScenarioResult& r) {
    fs::create_directories(dir);
    for (std::size_t a = 0; a < r.traces.size(); ++a) {
        write_text((dir / (stem + "_app" + std::to_string(a) + ".trace")).string(), format_trace(r.traces[a].trace));
    }
}

void print_summary(const std::vector<SummaryRow>& rows) {
    std::printf("%-18s %-16s %12s %5s %14s %14s %12s\n", "scenario", "strategy", "value", "runs", "completion_s",
                "overhead_s", "messages");
    for (const SummaryRow& s : rows) {
        std::printf("%-18s %-16s %12.6g %5zu %14.3f %14.3f %12.1f\n", s.scenario_id.c_str(),
                    std::string(to_string(s.strategy)).c_str(), s.sweep_value, s.runs, s.completion_mean,
                    s.overhead_mean, s.messages_mean);
    }
}

int cmd_generate(const Common& c) {
    ScenarioConfig cfg = c.config.empty() ? experiment_base() : io::scenario_from_json(io::load(c.config), experiment_base());
    if (c.seed) cfg.seed = *c.seed;
    const Workload w = generate_workload(cfg, cfg.seed);
    fs::create_directories(c.out);
    io::save((fs::path(c.out) / "scenario.json").string(), io::scenario_to_json(cfg));
    io::save((fs::path(c.out) / "workload.json").string(), io::workload_to_json(w));
    for (std::size_t a = 0; a < w.apps.size(); ++a) {
        const AppDag dag = scale_instructions(w.apps[a], cfg.instruction_scale * cfg.computation_scale);
        const SchedulePlan plan = baseline_schedule(dag, w.devices, cfg.source);
        io::save((fs::path(c.out) / ("plan_app" + std::to_string(a) + ".json")).string(), io::plan_to_json(plan));
    }
    std::printf("wrote %zu devices and %zu applications to %s\n", w.devices.size(), w.apps.size(), c.out.c_str());
    return 0;
}

int cmd_run(const Common& c, const std::string& workload_path, const std::string& scenario_id) {
    ScenarioConfig cfg = c.config.empty() ? experiment_base() : io::scenario_from_json(io::load(c.config), experiment_base());
    if (c.seed) cfg.seed = *c.seed;
    const Workload w = workload_path.empty() ? generate_workload(cfg, cfg.seed) : io::workload_from_json(io::load(workload_path));
    fs::create_directories(c.out);

    std::vector<ResultRow> rows;
    int failed = 0;
    for (Strategy st : pick(c.strategies, cfg.strategies)) {
        try {
            const ScenarioResult r = run_scenario(cfg, w, st, cfg.seed, c.trace);
            rows.push_back({scenario_id, st, 1.0, cfg.seed, r.completion_time, r.overhead_time, r.ft_messages});
            if (c.trace) write_traces(fs::path(c.out) / "traces", sanitize(std::string(to_string(st))), r);
        } catch (const Error& e) {
            std::fprintf(stderr, "%s: %s\n", std::string(to_string(st)).c_str(), e.what());
            ++failed;
        }
    }
    if (!rows.empty()) {
        emit_csv(rows, (fs::path(c.out) / "results.csv").string(), (fs::path(c.out) / "summary.csv").string());
        print_summary(summarize(rows));
    }
    return failed == 0 ? 0 : 1;
}

int cmd_sweep(const Common& c, const std::string& preset, std::optional<std::size_t> seeds) {
    ExperimentSpec spec;
    if (!c.config.empty()) {
        spec = io::experiment_from_json(io::load(c.config));
    } else if (preset == "exp1") {
        spec = experiment1_spec();
    } else if (preset == "exp2") {
        spec = experiment2_spec();
    } else {
        throw InvalidInput("sweep needs --config or --preset exp1|exp2");
    }
    if (c.seed) spec.first_seed = *c.seed;
    if (seeds) spec.seeds = *seeds;
    spec.strategies = pick(c.strategies, spec.strategies);
    fs::create_directories(c.out);

    CellObserver observe;
    if (c.trace) {
        observe = [&](double v, std::uint64_t seed, Strategy st, const ScenarioResult& r) {
            char stem[96];
            std::snprintf(stem, sizeof stem, "v%.10g_seed%llu_%s", v, static_cast<unsigned long long>(seed),
                          sanitize(std::string(to_string(st))).c_str());
            write_traces(fs::path(c.out) / "traces", stem, r);
        };
    }
    const ExperimentResult res = run_experiment(spec, observe);
    if (!res.rows.empty()) {
        emit_csv(res.rows, (fs::path(c.out) / "results.csv").string(), (fs::path(c.out) / "summary.csv").string());
        print_summary(summarize(res.rows));
    }
    if (!res.ok()) {
        write_text((fs::path(c.out) / "errors.csv").string(), errors_csv(res.errors));
        std::fprintf(stderr, "%zu cell(s) failed; see %s\n", res.errors.size(),
                     (fs::path(c.out) / "errors.csv").string().c_str());
        return 1;
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<ResultRow> rows;
    for (const std::string& p : inputs) {
        std::vector<ResultRow> part = parse_rows_csv(read_text(p), p);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    if (rows.empty()) throw InvalidInput("report: no rows in the inputs");
    const std::vector<SummaryRow> s = summarize(rows);
    if (!out.empty()) {
        const fs::path dir(out);
        fs::create_directories(dir);
        write_text((dir / "summary.csv").string(), summary_csv(s));
    }
    print_summary(s);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault-tolerance strategies for offloaded task graphs on unreliable devices"};
    app.require_subcommand(1);

    Common gen, run, sweep;
    auto* g = app.add_subcommand("generate", "Generate a device population, applications and baseline plans");
    add_common(g, gen, "Scenario JSON (layered over the experiment regime)");

    auto* r = app.add_subcommand("run", "Simulate one scenario under each strategy");
    add_common(r, run, "Scenario JSON (layered over the experiment regime)");
    std::string workload_path, scenario_id = "run";
    r->add_option("-w,--workload", workload_path, "Workload JSON written by 'generate'");
    r->add_option("--id", scenario_id, "scenario_id written to the CSV")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "Run an experiment sweep with paired seeds");
    add_common(sw, sweep, "Experiment JSON");
    std::string preset;
    std::optional<std::size_t> seeds;
    sw->add_option("--preset", preset, "Built-in experiment: exp1 (MTBF) or exp2 (computation scale)")
        ->check(CLI::IsMember({"exp1", "exp2"}));
    sw->add_option("-n,--seeds", seeds, "Seeds per sweep value");

    auto* rep = app.add_subcommand("report", "Aggregate result CSVs into means and standard deviations");
    std::vector<std::string> inputs;
    std::string rep_out;
    rep->add_option("inputs", inputs, "results.csv files")->required()->check(CLI::ExistingFile);
    rep->add_option("-o,--out", rep_out, "Directory for summary.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) return cmd_generate(gen);
        if (*r) return cmd_run(run, workload_path, scenario_id);
        if (*sw) return cmd_sweep(sweep, preset, seeds);
        if (*rep) return cmd_report(inputs, rep_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
