#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelea/config.hpp"
#include "levelea/csv.hpp"
#include "levelea/svg.hpp"

namespace levelea {

// ---------------------------------------------------------------------------
// Preset resolution: problem + kernel + the matrix the bound machinery uses.
// ---------------------------------------------------------------------------

struct ResolvedPreset {
    std::string label;
    ProblemInstance problem;
    MutationKernel kernel;
    BoundMatrix analysis_matrix;   // exact cumulative matrix or preset lower bounds
    bool matrix_is_exact = false;
};

/// Builds a preset from its CLI spelling, e.g. "vcp:m=8,pm=0.1". The optional
/// mutation override ("point:q=0.2" or "bitwise:pm=0.05") applies to the
/// presets where the operator is a free choice.
inline ResolvedPreset resolve_preset(const std::string& preset_text,
                                     const std::string& mutation_text = "") {
    const auto [name, params] = parse_preset_string(preset_text);
    const auto param = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    const auto need = [&](const char* key) {
        const auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("preset '" + preset_text + "': missing parameter " + key);
        return it->second;
    };

    ResolvedPreset out;
    out.label = preset_text;
    if (name == "onemax") {
        const int n = static_cast<int>(need("n"));
        out.problem = onemax(n);
        std::string mut = mutation_text.empty() ? "bitwise" : mutation_text;
        const auto [mut_name, mut_params] = parse_preset_string(mut);
        if (mut_name == "point") {
            const double q = mut_params.count("q") ? mut_params.at("q") : 1.0 / (n + 1);
            out.kernel = point_mutation_kernel(n, q);
        } else if (mut_name == "bitwise") {
            const double pm = mut_params.count("pm") ? mut_params.at("pm") : 1.0 / n;
            out.kernel = bitwise_mutation_kernel(n, pm);
        } else {
            throw std::invalid_argument("onemax: unsupported mutation '" + mut + "'");
        }
        out.analysis_matrix = *out.kernel.gamma;
        out.matrix_is_exact = true;
    } else if (name == "vcp") {
        const int m = static_cast<int>(need("m"));
        const double pm = need("pm");
        auto preset = vcp_triangles(m, pm);
        out.problem = std::move(preset.problem);
        out.kernel = std::move(preset.kernel);
        out.analysis_matrix = *out.kernel.gamma;
        out.matrix_is_exact = true;
    } else if (name == "unimodal") {
        const int n = static_cast<int>(need("n"));
        const int ell = static_cast<int>(need("ell"));
        out.problem = unimodal_path(n, ell);
        out.kernel = rls_mutation_kernel(out.problem.fitness);
        out.analysis_matrix = rls_unimodal_lower_bounds(n, ell);
    } else if (name == "2sat") {
        const int n = static_cast<int>(need("n"));
        const int clauses = static_cast<int>(param("clauses", 3 * n));
        const auto seed = static_cast<std::uint64_t>(param("seed", 1));
        auto inst = two_sat_planted(n, clauses, seed);
        out.problem = std::move(inst.problem);
        out.kernel = sat_walk_kernel(inst.formula);
        out.analysis_matrix = sat_walk_lower_bounds(n);
    } else if (name == "balas") {
        const int n = static_cast<int>(need("n"));
        double q = 1.0 / (n + 1);
        if (!mutation_text.empty()) {
            const auto [mut_name, mut_params] = parse_preset_string(mutation_text);
            if (mut_name != "point")
                throw std::invalid_argument("balas: only point mutation is supported");
            if (mut_params.count("q")) q = mut_params.at("q");
        }
        out.problem = balas_scp(n);
        out.kernel = point_mutation_kernel(n, q);
        out.kernel.gamma.reset();  // the cover partition folds large covers, so no exact matrix
        out.analysis_matrix = balas_point_lower_bounds(n, q);
    } else {
        throw std::invalid_argument("unknown problem preset '" + name + "'");
    }
    return out;
}

/// Expected initial superlevel vector for the supported initialization rules.
inline PopulationVector initial_expected_vector(const ResolvedPreset& preset, InitRule init) {
    const int m = preset.problem.m();
    if (init == InitRule::AllZeros) {
        // deterministic start: indicator of the all-zeros genotype's level
        // (level 0 for every preset except the distance-graded walk)
        const int start = preset.problem.classify(Genotype(preset.problem.n, 0));
        PopulationVector z = PopulationVector::zeros(m);
        for (int j = 1; j <= start; ++j) z.z[j - 1] = 1.0;
        return z;
    }
    // uniform and shared-uniform have the same expected level occupancy
    const auto [name, params] = parse_preset_string(preset.label);
    PopulationVector z;
    z.z.assign(m, 0.0);
    const auto binom_tail = [](int n, double p, int k_min) {
        // P{Bin(n,p) >= k_min}
        double prob = std::pow(1.0 - p, n), cdf_below = 0.0;
        for (int k = 0; k < k_min; ++k) {
            cdf_below += prob;
            prob *= (static_cast<double>(n - k) / (k + 1)) * (p / (1.0 - p));
        }
        return 1.0 - cdf_below;
    };
    if (name == "onemax") {
        for (int j = 1; j <= m; ++j) z.z[j - 1] = binom_tail(preset.problem.n, 0.5, j);
    } else if (name == "vcp") {
        for (int j = 1; j <= m; ++j) z.z[j - 1] = binom_tail(m, 0.75, j);
    } else if (name == "unimodal") {
        for (int j = 1; j <= m; ++j) z.z[j - 1] = std::ldexp(1.0, -j);  // leading ones tail
    } else if (name == "2sat") {
        for (int j = 1; j <= m; ++j) z.z[j - 1] = binom_tail(preset.problem.n, 0.5, j);
    } else if (name == "balas") {
        const int n = preset.problem.n;
        for (int j = 1; j < m; ++j) {
            // level >= j <=> at least j ones (large covers fold to level m-1)
            z.z[j - 1] = binom_tail(n, 0.5, j);
        }
        // exactly n/2 ones for the top level
        z.z[m - 1] = binom_tail(n, 0.5, m) - binom_tail(n, 0.5, m + 1);
    } else {
        throw std::invalid_argument("initial_expected_vector: unsupported preset " + name);
    }
    return z;
}

// ---------------------------------------------------------------------------
// Experiment specification and orchestration.
// ---------------------------------------------------------------------------

struct ExperimentSpec {
    std::string name = "experiment";
    std::string problem_preset;
    std::string mutation;  // optional operator override
    Variant variant = Variant::Ea;
    std::vector<int> lambdas{1};
    std::vector<int> tournament_sizes{1};
    InitRule init = InitRule::AllZeros;
    int runs = 1000;
    int t_max = 100;
    int grid_step = 1;
    int level = -1;  // tracked superlevel; -1 = top
    std::uint64_t seed = 1;
    std::vector<std::string> bound_kinds;
    bool svg = true;
    std::string out_dir = "out";
    int threads = 0;

    void validate() const {
        if (runs < 30) throw std::invalid_argument("ExperimentSpec: need at least 30 runs for intervals");
        if (t_max < 0 || grid_step < 1) throw std::invalid_argument("ExperimentSpec: bad grid");
        if (lambdas.empty() || tournament_sizes.empty())
            throw std::invalid_argument("ExperimentSpec: empty algorithm grid");
        for (const int l : lambdas)
            if (l < 1) throw std::invalid_argument("ExperimentSpec: lambda must be >= 1");
        for (const int s : tournament_sizes)
            if (s < 1) throw std::invalid_argument("ExperimentSpec: s must be >= 1");
    }
};

inline Variant variant_from_string(const std::string& v) {
    if (v == "ea") return Variant::Ea;
    if (v == "one_comma_lambda") return Variant::OneCommaLambda;
    if (v == "one_plus_one") return Variant::OnePlusOne;
    if (v == "rls") return Variant::Rls;
    throw std::invalid_argument("unknown algorithm variant '" + v + "'");
}

inline InitRule init_from_string(const std::string& v) {
    if (v == "zeros") return InitRule::AllZeros;
    if (v == "uniform") return InitRule::UniformRandom;
    if (v == "shared") return InitRule::UniformSharedCopy;
    throw std::invalid_argument("unknown init rule '" + v + "'");
}

inline ExperimentSpec spec_from_config(const IniConfig& cfg) {
    ExperimentSpec spec;
    spec.name = cfg.get("experiment", "name", "experiment");
    spec.problem_preset = cfg.require("problem", "preset");
    spec.mutation = cfg.get("algorithm", "mutation", "");
    spec.variant = variant_from_string(cfg.get("algorithm", "variant", "ea"));
    if (cfg.has("algorithm", "lambda")) spec.lambdas = cfg.get_int_list("algorithm", "lambda");
    if (cfg.has("algorithm", "s")) spec.tournament_sizes = cfg.get_int_list("algorithm", "s");
    spec.init = init_from_string(cfg.get("algorithm", "init", "zeros"));
    spec.runs = static_cast<int>(cfg.get_int("run", "runs", spec.runs));
    spec.t_max = static_cast<int>(cfg.get_int("run", "t_max", spec.t_max));
    spec.grid_step = static_cast<int>(cfg.get_int("run", "grid_step", 1));
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("run", "seed", 1));
    spec.level = static_cast<int>(cfg.get_int("run", "level", -1));
    spec.bound_kinds = cfg.get_list("bounds", "kinds");
    spec.svg = cfg.get_bool("output", "svg", true);
    spec.out_dir = cfg.get("output", "dir", "out");
    return spec;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace detail

/// Computes one bound trajectory by kind name. s and lambda are consumed by
/// the kinds that depend on them.
inline BoundTrajectory compute_bound(const ResolvedPreset& preset, const std::string& kind,
                                     const PopulationVector& z0, int s, int lambda, int t_max) {
    if (kind == "lower_linear") return lower_bound_linear(preset.analysis_matrix, z0, t_max);
    if (kind == "lower_chain")
        return lower_bound_chain(preset.analysis_matrix, level_distribution(z0), t_max,
                                 preset.problem.partition.all_levels_nonempty);
    if (kind == "upper_jensen") return upper_bound_jensen(preset.analysis_matrix, z0, s, t_max);
    if (kind == "infinite_population")
        return infinite_population_recursion(preset.analysis_matrix, z0.z, s, t_max);
    if (kind == "one_comma_lambda")
        return one_comma_lambda_recursion(preset.analysis_matrix, z0.z, lambda, t_max);
    throw std::invalid_argument("unknown bound kind '" + kind + "'");
}

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    std::string merged_csv;  // filled by run_experiment
};

/// Bound trajectories only: one CSV per (kind, grid point).
inline ExperimentResult cmd_bounds(const ExperimentSpec& spec) {
    spec.validate();
    const auto preset = resolve_preset(spec.problem_preset, spec.mutation);
    const auto z0 = initial_expected_vector(preset, spec.init);
    ExperimentResult result;
    for (const auto& kind : spec.bound_kinds) {
        const bool uses_s = kind == "upper_jensen" || kind == "infinite_population";
        const bool uses_lambda = kind == "one_comma_lambda";
        const auto s_grid = uses_s ? spec.tournament_sizes : std::vector<int>{1};
        const auto l_grid = uses_lambda ? spec.lambdas : std::vector<int>{1};
        for (const int s : s_grid) {
            for (const int lambda : l_grid) {
                const auto traj = compute_bound(preset, kind, z0, s, lambda, spec.t_max);
                std::string stem = spec.name + "_" + kind;
                if (uses_s) stem += "_s" + std::to_string(s);
                if (uses_lambda) stem += "_lam" + std::to_string(lambda);
                const auto path = std::filesystem::path(spec.out_dir) / (stem + ".csv");
                detail::write_file(path, trajectory_to_csv(traj));
                result.files.push_back(path);
            }
        }
    }
    return result;
}

/// Monte-Carlo grid: per (lambda, s) point one run-statistics CSV and one
/// estimate CSV for the tracked level.
inline ExperimentResult cmd_simulate(const ExperimentSpec& spec) {
    spec.validate();
    const auto preset = resolve_preset(spec.problem_preset, spec.mutation);
    const int level = spec.level > 0 ? spec.level : preset.problem.m();
    ExperimentResult result;
    for (const int lambda : spec.lambdas) {
        for (const int s : spec.tournament_sizes) {
            AlgorithmConfig cfg;
            cfg.variant = spec.variant;
            cfg.lambda = lambda;
            cfg.s = s;
            cfg.kernel = preset.kernel;
            cfg.problem = preset.problem;
            cfg.init = spec.init;
            cfg.t_max = spec.t_max;
            cfg.seed = spec.seed;
            const auto runs = run_many(cfg, spec.runs, spec.threads);
            const std::string stem =
                spec.name + "_sim_lam" + std::to_string(lambda) + "_s" + std::to_string(s);
            const auto raw_path = std::filesystem::path(spec.out_dir) / (stem + ".csv");
            detail::write_file(raw_path, run_statistics_to_csv(runs, level, spec.seed));
            result.files.push_back(raw_path);

            std::vector<int> grid;
            for (int t = 0; t <= spec.t_max; t += spec.grid_step) grid.push_back(t);
            const auto series = estimate_level_probability(runs, level, grid);
            std::ostringstream est;
            est << "# seed=" << spec.seed << " level=" << level << '\n';
            est << "t,p,ci_lo,ci_hi,degenerate\n";
            for (const auto& pt : series)
                est << pt.t << ',' << detail::format_compact(pt.p) << ','
                    << detail::format_compact(pt.lo) << ',' << detail::format_compact(pt.hi) << ','
                    << (pt.degenerate ? 1 : 0) << '\n';
            const auto est_path = std::filesystem::path(spec.out_dir) / (stem + "_estimate.csv");
            detail::write_file(est_path, est.str());
            result.files.push_back(est_path);
        }
    }
    return result;
}

/// Full figure pipeline: Monte-Carlo grid plus bound trajectories merged into
/// one long-format CSV, rendered to SVG when requested.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto preset = resolve_preset(spec.problem_preset, spec.mutation);
    const int level = spec.level > 0 ? spec.level : preset.problem.m();
    const auto z0 = initial_expected_vector(preset, spec.init);

    std::vector<SeriesRow> rows;
    std::vector<int> grid;
    for (int t = 0; t <= spec.t_max; t += spec.grid_step) grid.push_back(t);

    for (const int lambda : spec.lambdas) {
        for (const int s : spec.tournament_sizes) {
            AlgorithmConfig cfg;
            cfg.variant = spec.variant;
            cfg.lambda = lambda;
            cfg.s = s;
            cfg.kernel = preset.kernel;
            cfg.problem = preset.problem;
            cfg.init = spec.init;
            cfg.t_max = spec.t_max;
            cfg.seed = spec.seed;
            const auto runs = run_many(cfg, spec.runs, spec.threads);
            const auto series = estimate_level_probability(runs, level, grid);
            const std::string label =
                "empirical lam=" + std::to_string(lambda) + " s=" + std::to_string(s);
            for (const auto& pt : series)
                rows.push_back(SeriesRow{spec.problem_preset, lambda, s, pt.t, label, pt.p, pt.lo,
                                         pt.hi, true});
        }
    }

    for (const auto& kind : spec.bound_kinds) {
        const bool uses_s = kind == "upper_jensen" || kind == "infinite_population";
        const bool uses_lambda = kind == "one_comma_lambda";
        const auto s_grid = uses_s ? spec.tournament_sizes : std::vector<int>{1};
        const auto l_grid = uses_lambda ? spec.lambdas : std::vector<int>{1};
        for (const int s : s_grid) {
            for (const int lambda : l_grid) {
                const auto traj = compute_bound(preset, kind, z0, s, lambda, spec.t_max);
                std::string label = kind;
                if (uses_s) label += " s=" + std::to_string(s);
                if (uses_lambda) label += " lam=" + std::to_string(lambda);
                for (const int t : grid)
                    rows.push_back(SeriesRow{spec.problem_preset, lambda, s, t, label,
                                             traj.at(t)[level - 1], 0.0, 0.0, false});
            }
        }
    }

    ExperimentResult result;
    result.merged_csv = "# experiment=" + spec.name + " seed=" + std::to_string(spec.seed) +
                        " runs=" + std::to_string(spec.runs) + "\n" + series_to_csv(rows);
    const auto csv_path = std::filesystem::path(spec.out_dir) / (spec.name + ".csv");
    detail::write_file(csv_path, result.merged_csv);
    result.files.push_back(csv_path);
    if (spec.svg) {
        PlotSpec plot;
        plot.title = spec.name + " (" + spec.problem_preset + ", level " + std::to_string(level) + ")";
        const auto svg_path = std::filesystem::path(spec.out_dir) / (spec.name + ".svg");
        detail::write_file(svg_path, svg_from_series_csv(result.merged_csv, plot));
        result.files.push_back(svg_path);
    }
    return result;
}

}  // namespace levelea
