#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <ftsim/engine.hpp>
#include <ftsim/error.hpp>
#include <ftsim/workload.hpp>

namespace ftsim {

enum class SweepVariable { Mtbf, ComputationScale };

inline std::string_view to_string(SweepVariable v) {
    return v == SweepVariable::Mtbf ? "mtbf" : "computation_scale";
}

inline SweepVariable parse_sweep_variable(std::string_view s) {
    if (s == "mtbf") return SweepVariable::Mtbf;
    if (s == "computation_scale") return SweepVariable::ComputationScale;
    throw InvalidInput("unknown sweep variable '" + std::string(s) + "'");
}

struct ExperimentSpec {
    std::string scenario_id = "experiment";
    SweepVariable variable = SweepVariable::Mtbf;
    std::vector<double> values;
    std::size_t seeds = 20;
    std::uint64_t first_seed = 1;
    ScenarioConfig base;
    std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
};

inline void validate(const ExperimentSpec& s) {
    if (s.values.empty()) throw InvalidInput("experiment: value list is empty");
    if (s.seeds == 0) throw InvalidInput("experiment: seeds must be >= 1");
    if (s.strategies.empty()) throw InvalidInput("experiment: no strategies");
    if (s.scenario_id.empty() || s.scenario_id.find_first_of(",\n\"") != std::string::npos) {
        throw InvalidInput("experiment: scenario_id must be non-empty and free of commas, quotes and newlines");
    }
    for (double v : s.values) {
        if (!(v > 0.0)) throw InvalidInput("experiment: sweep values must be > 0");
    }
    validate(s.base);
}

// Scenario for one sweep point. MTBF points pin every device's Weibull mean to
// the value, keeping the configured shape.
inline ScenarioConfig scenario_at(const ExperimentSpec& s, double value) {
    ScenarioConfig c = s.base;
    if (s.variable == SweepVariable::Mtbf) {
        c.mtbf = Range{value, value};
    } else {
        c.computation_scale = value;
    }
    return c;
}

inline std::vector<double> experiment1_mtbf_values() {
    std::vector<double> v;
    for (int m = 10; m <= 120; m += 10) v.push_back(m);
    return v;
}

// Regime used for the two published sweeps: twenty devices, task work scaled
// so makespans reach minutes, snapshots a tenth of the task data.
inline ScenarioConfig experiment_base() {
    ScenarioConfig c;
    c.device_count = {20, 20};
    c.instruction_scale = 5e6;
    c.snapshot_ratio = 0.1;
    return c;
}

inline ExperimentSpec experiment1_spec() {
    ExperimentSpec s;
    s.scenario_id = "exp1_mtbf";
    s.variable = SweepVariable::Mtbf;
    s.values = experiment1_mtbf_values();
    s.base = experiment_base();
    return s;
}

inline ExperimentSpec experiment2_spec() {
    ExperimentSpec s;
    s.scenario_id = "exp2_computation";
    s.variable = SweepVariable::ComputationScale;
    s.values = {1, 2, 3, 4};
    s.base = experiment_base();
    s.base.mtbf = Range{90, 120};
    return s;
}

struct ResultRow {
    std::string scenario_id;
    Strategy strategy = Strategy::NoFt;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double completion_time = 0.0;
    double overhead_time = 0.0;
    std::uint64_t ft_messages = 0;
};

struct CellError {
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    std::optional<Strategy> strategy;  // empty when workload generation itself failed
    std::string message;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<CellError> errors;
    bool ok() const { return errors.empty(); }
};

using CellObserver = std::function<void(double value, std::uint64_t seed, Strategy, const ScenarioResult&)>;

// Every strategy of a (value, seed) cell runs on the same generated workload
// and therefore on the same device failure schedules.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, const CellObserver& observe = {}) {
    validate(spec);
    ExperimentResult out;
    for (double v : spec.values) {
        const ScenarioConfig cfg = scenario_at(spec, v);
        for (std::size_t i = 0; i < spec.seeds; ++i) {
            const std::uint64_t seed = spec.first_seed + i;
            Workload w;
            try {
                w = generate_workload(cfg, seed);
            } catch (const std::exception& e) {
                out.errors.push_back({v, seed, std::nullopt, e.what()});
                continue;
            }
            for (Strategy st : spec.strategies) {
                try {
                    const ScenarioResult r = run_scenario(cfg, w, st, seed, static_cast<bool>(observe));
                    if (observe) observe(v, seed, st, r);
                    out.rows.push_back({spec.scenario_id, st, v, seed, r.completion_time, r.overhead_time, r.ft_messages});
                } catch (const std::exception& e) {
                    out.errors.push_back({v, seed, st, e.what()});
                }
            }
        }
    }
    return out;
}

inline constexpr std::string_view kCsvHeader =
    "scenario_id,strategy,sweep_value,seed,completion_time_s,overhead_s,ft_messages";
inline constexpr std::string_view kSummaryHeader =
    "scenario_id,strategy,sweep_value,runs,completion_mean_s,completion_std_s,overhead_mean_s,overhead_std_s,"
    "ft_messages_mean,ft_messages_std";

namespace detail {
inline std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}
} // namespace detail

inline std::string format_row(const ResultRow& r) {
    return r.scenario_id + "," + std::string(to_string(r.strategy)) + "," + detail::fmt("%.10g", r.sweep_value) +
           "," + std::to_string(r.seed) + "," + detail::fmt("%.6f", r.completion_time) + "," +
           detail::fmt("%.6f", r.overhead_time) + "," + std::to_string(r.ft_messages);
}

inline std::string rows_csv(const std::vector<ResultRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const ResultRow& r : rows) out += format_row(r) + '\n';
    return out;
}

struct SummaryRow {
    std::string scenario_id;
    Strategy strategy = Strategy::NoFt;
    double sweep_value = 0.0;
    std::size_t runs = 0;
    double completion_mean = 0.0, completion_std = 0.0;
    double overhead_mean = 0.0, overhead_std = 0.0;
    double messages_mean = 0.0, messages_std = 0.0;
};

// Mean and sample standard deviation per (scenario, value, strategy), in
// first-appearance order of the groups.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, double, int>;
    std::map<Key, std::size_t> index;
    std::vector<std::vector<const ResultRow*>> groups;
    for (const ResultRow& r : rows) {
        const Key k{r.scenario_id, r.sweep_value, static_cast<int>(r.strategy)};
        auto [it, fresh] = index.emplace(k, groups.size());
        if (fresh) groups.emplace_back();
        groups[it->second].push_back(&r);
    }
    auto stats = [](const std::vector<double>& x) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        const double sd = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
        return std::pair{mean, sd};
    };
    std::vector<SummaryRow> out;
    for (const auto& g : groups) {
        std::vector<double> c, o, m;
        for (const ResultRow* r : g) {
            c.push_back(r->completion_time);
            o.push_back(r->overhead_time);
            m.push_back(static_cast<double>(r->ft_messages));
        }
        SummaryRow s;
        s.scenario_id = g.front()->scenario_id;
        s.strategy = g.front()->strategy;
        s.sweep_value = g.front()->sweep_value;
        s.runs = g.size();
        std::tie(s.completion_mean, s.completion_std) = stats(c);
        std::tie(s.overhead_mean, s.overhead_std) = stats(o);
        std::tie(s.messages_mean, s.messages_std) = stats(m);
        out.push_back(s);
    }
    return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const SummaryRow& s : rows) {
        out += s.scenario_id + "," + std::string(to_string(s.strategy)) + "," + detail::fmt("%.10g", s.sweep_value) +
               "," + std::to_string(s.runs) + "," + detail::fmt("%.6f", s.completion_mean) + "," +
               detail::fmt("%.6f", s.completion_std) + "," + detail::fmt("%.6f", s.overhead_mean) + "," +
               detail::fmt("%.6f", s.overhead_std) + "," + detail::fmt("%.6f", s.messages_mean) + "," +
               detail::fmt("%.6f", s.messages_std) + '\n';
    }
    return out;
}

inline std::string errors_csv(const std::vector<CellError>& errors) {
    std::string out = "sweep_value,seed,strategy,message\n";
    for (const CellError& e : errors) {
        std::string msg = e.message;
        for (char& ch : msg) {
            if (ch == '\n' || ch == ',') ch = ' ';
        }
        out += detail::fmt("%.10g", e.sweep_value) + "," + std::to_string(e.seed) + "," +
               (e.strategy ? std::string(to_string(*e.strategy)) : std::string("-")) + "," + msg + '\n';
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Raw rows plus a summary file next to them.
inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path, const std::string& summary_path) {
    if (rows.empty()) throw InvalidInput("emit_csv: no rows");
    write_text(path, rows_csv(rows));
    write_text(summary_path, summary_csv(summarize(rows)));
}

inline std::vector<ResultRow> parse_rows_csv(const std::string& text, const std::string& origin = "<csv>") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw InvalidInput(origin + ": unexpected header '" + line + "'");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 7) throw InvalidInput(origin + ":" + std::to_string(lineno) + ": expected 7 fields");
        try {
            ResultRow r;
            r.scenario_id = f[0];
            r.strategy = parse_strategy(f[1]);
            r.sweep_value = std::stod(f[2]);
            r.seed = std::stoull(f[3]);
            r.completion_time = std::stod(f[4]);
            r.overhead_time = std::stod(f[5]);
            r.ft_messages = std::stoull(f[6]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error& e) {
            throw InvalidInput(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

} // namespace ftsim
