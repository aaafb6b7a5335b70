#pragma once

// Sweep and comparison experiments: run the subdivision methods over a
// corpus at a schedule of limits, collect quality reports and plot-ready
// series, and check the relative orderings between methods.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trisub/io.hpp"
#include "trisub/mesh.hpp"
#include "trisub/metrics.hpp"
#include "trisub/shapes.hpp"
#include "trisub/subdivide.hpp"

namespace trisub {

struct SweepSpec {
    std::vector<Method> methods{Method::classic, Method::novel, Method::multistage,
                                Method::angle_restricted};
    std::vector<double> limits;               // strictly descending
    bool relative_limits = false;             // limits as fractions of the bbox diagonal
    std::vector<double> fold_factors{1.5, 1.8, 2.0};
    std::vector<double> theta0_deg{15.0, 30.0, 45.0};
    int repetitions = 5;                      // timing repetitions, median reported
    double initial_limit_factor = 4.0;        // multistage L0 = factor * limit

    void validate() const {
        if (limits.empty()) throw std::invalid_argument("sweep: limits must be nonempty");
        for (std::size_t i = 0; i + 1 < limits.size(); ++i)
            if (!(limits[i] > limits[i + 1]))
                throw std::invalid_argument("sweep: limits must be strictly descending");
        for (double l : limits)
            if (!(l > 0.0)) throw std::invalid_argument("sweep: limits must be > 0");
        if (repetitions < 1) throw std::invalid_argument("sweep: repetitions must be >= 1");
        for (Method m : methods) {
            if (m == Method::multistage && fold_factors.empty())
                throw std::invalid_argument("sweep: multistage selected with empty fold grid");
            if (m == Method::angle_restricted && theta0_deg.empty())
                throw std::invalid_argument(
                    "sweep: angle-restricted selected with empty theta0 grid");
        }
        if (!(initial_limit_factor >= 1.0))
            throw std::invalid_argument("sweep: initial_limit_factor must be >= 1");
    }
};

struct SeriesRow {
    std::string method;
    std::string param;  // "f=1.8", "theta0=30", or empty
    double limit = 0.0;
    std::uint64_t final_count = 0;
    std::uint64_t created_total = 0;
    std::uint64_t new_vertices = 0;
    double time_sec = 0.0;
};

struct CellFailure {
    std::string method;
    std::string param;
    double limit = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<QualityReport> reports;
    std::vector<SeriesRow> series;
    std::vector<CellFailure> failures;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct SweepCellConfig {
    SubdivisionConfig config;
    std::string label;
    std::string param;
};

inline std::vector<SweepCellConfig> sweep_cells(const SweepSpec& sweep, double limit) {
    std::vector<SweepCellConfig> cells;
    for (Method m : sweep.methods) {
        switch (m) {
            case Method::classic:
            case Method::novel: {
                SweepCellConfig cell;
                cell.config.method = m;
                cell.config.max_edge = limit;
                cell.label = method_name(m);
                cells.push_back(cell);
                break;
            }
            case Method::multistage:
                for (double f : sweep.fold_factors) {
                    SweepCellConfig cell;
                    cell.config.method = m;
                    cell.config.max_edge = limit;
                    cell.config.fold_factor = f;
                    cell.config.initial_limit = sweep.initial_limit_factor * limit;
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "f=%g", f);
                    cell.param = buf;
                    cell.label = std::string(method_name(m)) + " (" + buf + ")";
                    cells.push_back(cell);
                }
                break;
            case Method::angle_restricted:
                for (double th : sweep.theta0_deg) {
                    SweepCellConfig cell;
                    cell.config.method = m;
                    cell.config.max_edge = limit;
                    cell.config.angle_threshold_deg = th;
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "theta0=%g", th);
                    cell.param = buf;
                    cell.label = std::string(method_name(m)) + " (" + buf + ")";
                    cells.push_back(cell);
                }
                break;
        }
    }
    return cells;
}

}  // namespace detail

// Runs every (method, parameter, limit) cell on a fresh copy of the corpus.
// Timing is the median over `repetitions` runs, subdivision only. A failing
// cell is recorded and the sweep continues.
inline SweepResult run_sweep(const TriangleMesh& corpus, const SweepSpec& sweep) {
    sweep.validate();
    const double scale = sweep.relative_limits ? bbox_diagonal(corpus) : 1.0;

    SweepResult result;
    for (double raw_limit : sweep.limits) {
        const double limit = raw_limit * scale;
        for (const detail::SweepCellConfig& cell : detail::sweep_cells(sweep, limit)) {
            try {
                std::vector<double> times;
                SubdivisionOutcome outcome;
                for (int rep = 0; rep < sweep.repetitions; ++rep) {
                    outcome = subdivide(corpus, cell.config);
                    times.push_back(outcome.seconds);
                }
                double t = detail::median(std::move(times));

                QualityReport rep = build_report(outcome.mesh, limit, t, cell.label);
                rep.created_total = outcome.triangles_created_total;
                rep.stack_high_water = outcome.stack_high_water;
                result.reports.push_back(std::move(rep));

                SeriesRow row;
                row.method = method_name(cell.config.method);
                row.param = cell.param;
                row.limit = limit;
                row.final_count = outcome.final_triangles;
                row.created_total = outcome.triangles_created_total;
                row.new_vertices = outcome.new_vertices;
                row.time_sec = t;
                result.series.push_back(std::move(row));
            } catch (const std::exception& e) {
                result.failures.push_back({method_name(cell.config.method), cell.param, limit,
                                           e.what()});
            }
        }
    }
    return result;
}

inline std::string series_csv_string(const std::vector<SeriesRow>& series) {
    std::string out = "method,param,limit,final_count,created_total,new_vertices,time_sec\n";
    for (const SeriesRow& r : series) {
        out += r.method + "," + r.param + "," + detail::fmt_f64(r.limit) + "," +
               std::to_string(r.final_count) + "," + std::to_string(r.created_total) + "," +
               std::to_string(r.new_vertices) + "," + detail::fmt_f64(r.time_sec) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Eight-method comparison table
// ---------------------------------------------------------------------------

struct OrderingCheck {
    std::string name;
    bool held = false;
};

struct TableOneResult {
    std::vector<QualityReport> reports;  // classic, novel, restricted x3, multistage x3
    std::vector<SubdivisionOutcome> outcomes;
    std::vector<OrderingCheck> checks;
};

// One row per method at a common final limit, plus the relative orderings
// the comparison is about: element counts multistage < restricted <= novel
// < classic, quality q>0.8 classic < novel < multistage, and the acute-angle
// fraction classic > novel.
inline TableOneResult table_one_experiment(const TriangleMesh& corpus, double limit,
                                           int repetitions = 1,
                                           double initial_limit_factor = 4.0) {
    SweepSpec sweep;
    sweep.methods = {Method::classic, Method::novel, Method::angle_restricted,
                     Method::multistage};
    sweep.limits = {limit};
    sweep.repetitions = repetitions;
    sweep.initial_limit_factor = initial_limit_factor;
    sweep.validate();

    TableOneResult result;
    for (const detail::SweepCellConfig& cell : detail::sweep_cells(sweep, limit)) {
        std::vector<double> times;
        SubdivisionOutcome outcome;
        for (int rep = 0; rep < repetitions; ++rep) {
            outcome = subdivide(corpus, cell.config);
            times.push_back(outcome.seconds);
        }
        QualityReport rep = build_report(outcome.mesh, limit, detail::median(std::move(times)),
                                         cell.label);
        rep.created_total = outcome.triangles_created_total;
        rep.stack_high_water = outcome.stack_high_water;
        result.reports.push_back(std::move(rep));
        result.outcomes.push_back(std::move(outcome));
    }

    // row order from sweep_cells: classic, novel, restricted(15,30,45),
    // multistage(1.5,1.8,2.0)
    const QualityReport& classic = result.reports[0];
    const QualityReport& novel = result.reports[1];
    auto restricted = [&](int i) -> const QualityReport& { return result.reports[2 + i]; };
    auto multistage = [&](int i) -> const QualityReport& { return result.reports[5 + i]; };

    auto add_check = [&](const std::string& name, bool held) {
        result.checks.push_back({name, held});
    };

    bool counts_ok = true;
    for (int m = 0; m < 3; ++m)
        for (int r = 0; r < 3; ++r)
            counts_ok = counts_ok && multistage(m).vertices < restricted(r).vertices &&
                        multistage(m).triangles < restricted(r).triangles;
    add_check("vertices_meshes: multistage < restricted", counts_ok);

    bool restricted_le_novel = true;
    for (int r = 0; r < 3; ++r)
        restricted_le_novel = restricted_le_novel &&
                              restricted(r).vertices <= novel.vertices &&
                              restricted(r).triangles <= novel.triangles;
    add_check("vertices_meshes: restricted <= novel", restricted_le_novel);

    add_check("vertices_meshes: novel < classic",
              novel.vertices < classic.vertices && novel.triangles < classic.triangles);

    bool q_ok = classic.q_gt08 < novel.q_gt08;
    for (int m = 0; m < 3; ++m) q_ok = q_ok && novel.q_gt08 < multistage(m).q_gt08;
    add_check("q_gt08: classic < novel < multistage", q_ok);

    add_check("angle_lt15: classic > novel", classic.angle_lt15 > novel.angle_lt15);

    return result;
}

inline std::string ordering_checks_json(const TableOneResult& result) {
    nlohmann::ordered_json j;
    for (const OrderingCheck& c : result.checks) j[c.name] = c.held;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

struct BenchConfig {
    CorpusSpec corpus;
    SweepSpec sweep;
    bool run_table_one = false;
    double table_one_limit = 0.0;  // same units as sweep limits
};

inline BenchConfig load_bench_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    BenchConfig cfg;
    try {
        const auto& c = j.at("corpus");
        cfg.corpus.shape = c.at("shape").get<std::string>();
        cfg.corpus.radius = c.value("radius", cfg.corpus.radius);
        cfg.corpus.skew = c.value("skew", cfg.corpus.skew);
        cfg.corpus.level = c.value("level", cfg.corpus.level);
        cfg.corpus.height = c.value("height", cfg.corpus.height);
        cfg.corpus.segments = c.value("segments", cfg.corpus.segments);
        cfg.corpus.count = c.value("count", cfg.corpus.count);
        cfg.corpus.aspect = c.value("aspect", cfg.corpus.aspect);
        cfg.corpus.seed = c.value("seed", cfg.corpus.seed);

        const auto& s = j.at("sweep");
        if (s.contains("methods")) {
            cfg.sweep.methods.clear();
            for (const auto& m : s.at("methods"))
                cfg.sweep.methods.push_back(parse_method(m.get<std::string>()));
        }
        cfg.sweep.limits = s.at("limits").get<std::vector<double>>();
        cfg.sweep.relative_limits = s.value("relative_limits", cfg.sweep.relative_limits);
        if (s.contains("fold_factors"))
            cfg.sweep.fold_factors = s.at("fold_factors").get<std::vector<double>>();
        if (s.contains("theta0_deg"))
            cfg.sweep.theta0_deg = s.at("theta0_deg").get<std::vector<double>>();
        cfg.sweep.repetitions = s.value("repetitions", cfg.sweep.repetitions);
        cfg.sweep.initial_limit_factor =
            s.value("initial_limit_factor", cfg.sweep.initial_limit_factor);

        if (j.contains("table_one_limit")) {
            cfg.run_table_one = true;
            cfg.table_one_limit = j.at("table_one_limit").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": bad sweep config: " + e.what());
    }
    cfg.sweep.validate();
    return cfg;
}

// The stock sweep exercised by `trisub bench` without a config file: every
// corpus shape at three relative limits, all four methods.
inline std::vector<std::pair<std::string, CorpusSpec>> default_corpora() {
    std::vector<std::pair<std::string, CorpusSpec>> out;
    CorpusSpec hexagon;
    hexagon.shape = "hexagon";
    hexagon.skew = 0.6;
    out.emplace_back("hexagon", hexagon);
    CorpusSpec sphere;
    sphere.shape = "icosphere";
    sphere.level = 1;
    out.emplace_back("icosphere", sphere);
    CorpusSpec cylinder;
    cylinder.shape = "cylinder";
    cylinder.segments = 24;
    out.emplace_back("cylinder", cylinder);
    CorpusSpec soup;
    soup.shape = "needle_soup";
    soup.count = 100;
    soup.aspect = 10.0;
    soup.seed = 7;
    out.emplace_back("needle_soup", soup);
    CorpusSpec panel;
    panel.shape = "stretched_panel";
    panel.count = 200;
    panel.aspect = 20.0;
    panel.seed = 7;
    out.emplace_back("stretched_panel", panel);
    return out;
}

inline SweepSpec default_sweep_spec() {
    SweepSpec sweep;
    sweep.limits = {0.25, 0.1, 0.05};
    sweep.relative_limits = true;
    sweep.repetitions = 1;
    return sweep;
}

}  // namespace trisub
