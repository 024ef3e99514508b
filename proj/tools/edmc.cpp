//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

// edmc: distance-matrix completion from the command line.
//
//   edmc complete    --input obs.txt --output out/
//   edmc embed       --input D.csv --dim 2 --output out/
//   edmc score       --input D.csv
//   edmc bench-bound --output bench/
//   edmc bench-alpha --output bench/
//
// Exit codes: 0 success, 2 bad configuration, 3 I/O failure, 4 disconnected
// graph, 5 solver did not converge (outputs are still written).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edmc/errors.hpp"
#include "edmc/graph.hpp"
#include "edmc/harness.hpp"
#include "edmc/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace edmc;

namespace {

enum ExitCode : int {
    kOk = 0,
    kBadConfig = 2,
    kIo = 3,
    kDisconnected = 4,
    kNotConverged = 5,
};

struct Options {
    std::string input;
    std::string output = ".";
    std::string format;
    std::string config;
    std::string rule = "uniform";
    std::optional<long long> m;
    std::optional<long long> k;
    std::optional<double> eps;
    std::optional<double> eta;
    std::string noise = "gaussian";
    std::optional<std::uint64_t> seed;
    std::optional<double> rho1, rho2, c_rho, kappa, tol;
    std::optional<long long> rank;
    std::optional<int> max_iter;
    std::optional<long long> dim;
    bool verbose = false;
    bool restart = false;
    // Benchmarks.
    long long n = 0;
    std::vector<double> fractions;
    std::vector<double> deltas;
    int seeds = 0;
    int solve_seeds = 0;
    unsigned threads = 0;
};

void add_model_flags(CLI::App& app, Options& o) {
    app.add_option("--config", o.config, "Parameter file with key = value lines");
    app.add_option("--rho1", o.rho1, "Spectral penalty weight (estimated when absent)");
    app.add_option("--rho2", o.rho2, "Subspace reward: 0 nuclear norm, 1 default, 2 MVE-like");
    app.add_option("--c-rho", o.c_rho, "Multiplier on the estimated rho1");
    app.add_option("--kappa", o.kappa, "Constant kappa > 1 in the rho1 estimate");
    app.add_option("--rank", o.rank, "Target embedding dimension r");
    app.add_option("--tol", o.tol, "Stopping tolerance on max(R_p, R_d)");
    app.add_option("--max-iter", o.max_iter, "Outer iteration cap");
    app.add_option("--eta", o.eta, "Noise scale (estimated from residuals when absent)");
    app.add_flag("--restart", o.restart, "Reset momentum when the objective increases");
    app.add_flag("--verbose", o.verbose, "Per-iteration solver log on stderr");
}

void add_sampling_flags(CLI::App& app, Options& o) {
    app.add_option("--rule", o.rule, "Sampling rule for matrix input")
        ->check(CLI::IsMember({"uniform", "knn", "ball"}));
    app.add_option("--m", o.m, "Number of uniform samples");
    app.add_option("--k", o.k, "Neighbours per vertex for the knn rule");
    app.add_option("--eps", o.eps, "Radius for the ball rule");
    app.add_option("--noise", o.noise, "Noise family")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}));
    app.add_option("--seed", o.seed, "Seed for sampling and noise");
}

// Defaults, then the parameter file, then explicit flags.
CompletionSettings resolve_settings(const Options& o, std::uint64_t* seed_out = nullptr) {
    CompletionSettings s;
    std::uint64_t seed = 1;
    if (!o.config.empty()) {
        auto in = open_for_read(o.config);
        const ParameterFile file = read_parameter_file(in);
        file.apply_to(s.params);
        if (file.rho1) s.rho1 = *file.rho1;
        if (file.eta) s.eta = *file.eta;
        if (file.seed) seed = *file.seed;
    }
    if (o.rho1) s.rho1 = *o.rho1;
    if (o.rho2) s.params.rho2 = *o.rho2;
    if (o.c_rho) s.params.c_rho = *o.c_rho;
    if (o.kappa) s.params.kappa = *o.kappa;
    if (o.rank) s.params.rank = static_cast<Index>(*o.rank);
    if (o.tol) s.params.tol = *o.tol;
    if (o.max_iter) s.params.max_iter = *o.max_iter;
    if (o.eta) s.eta = *o.eta;
    if (o.seed) seed = *o.seed;
    s.solver.adaptive_restart = o.restart;
    if (o.verbose) s.solver.log = &std::cerr;
    s.params.validate();
    if (seed_out) *seed_out = seed;
    return s;
}

std::string infer_format(const Options& o, const char* fallback) {
    if (!o.format.empty()) return o.format;
    const std::string ext = fs::path(o.input).extension().string();
    if (ext == ".csv") return "matrix";
    return fallback;
}

SymmetricMatrix read_matrix_file(const std::string& path) {
    auto in = open_for_read(path);
    try {
        return read_matrix_csv(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

ObservationSet sample_from_matrix(const SymmetricMatrix& d, const Options& o, double eta,
                                  std::uint64_t seed) {
    const Index n = d.size();
    std::vector<IndexPair> pairs;
    if (o.rule == "uniform") {
        if (!o.m) throw InvalidArgument("--rule uniform needs --m");
        pairs = sample_uniform(n, static_cast<Index>(*o.m), derive_seed(seed, 1));
    } else if (o.rule == "knn") {
        if (!o.k) throw InvalidArgument("--rule knn needs --k");
        pairs = sample_knn(d, static_cast<Index>(*o.k));
    } else {
        if (!o.eps) throw InvalidArgument("--rule ball needs --eps");
        pairs = sample_unit_ball(d, *o.eps);
    }
    if (pairs.empty()) throw InvalidArgument("sampling rule selected no pairs");
    const NoiseSpec noise{parse_noise_kind(o.noise), derive_seed(seed, 2)};
    return observe(pairs, d, eta, noise);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    auto out = open_for_write(path);
    fn(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json report_json(const CompletionResult& r, Index m) {
    json j;
    j["n"] = r.d_star.size();
    j["m"] = m;
    j["rank"] = r.params.rank;
    j["rho1"] = r.params.rho1;
    j["rho2"] = r.params.rho2;
    j["iterations"] = r.report.iterations;
    j["R_p"] = r.report.residuals.primal;
    j["R_d"] = r.report.residuals.dual;
    j["edm_scores"] = r.embedding.edm_scores;
    j["wall_seconds"] = r.report.wall_seconds;
    j["converged"] = r.report.converged;
    j["eta"] = r.params.eta;
    j["tol"] = r.params.tol;
    j["inner_iterations"] = r.report.inner_iterations;
    j["original_index"] = r.original_index;
    return j;
}

void write_embedding(const fs::path& dir, const SymmetricMatrix& d, Index dim) {
    const EmbeddingResult e = cmds_embed(d, dim);
    write_file(dir / "coordinates.csv", [&](std::ostream& o) { write_coordinates_csv(o, e.points); });
    write_file(dir / "spectrum.csv", [&](std::ostream& o) { write_spectrum_csv(o, e.spectrum); });
}

CompletionResult run_completion(const Options& o, const fs::path& out_dir, Index* m_out,
                                bool write_obs_always) {
    std::uint64_t seed = 1;
    CompletionSettings settings = resolve_settings(o, &seed);
    if (o.input.empty()) throw InvalidArgument("--input is required");
    const std::string format = infer_format(o, "triplets");

    std::optional<ObservationSet> obs;
    CompletionResult result = [&] {
        if (format == "counts") {
            auto in = open_for_read(o.input);
            const InteractionCounts counts = read_interaction_counts(in);
            CompletionResult r = complete_from_counts(counts, settings);
            *m_out = static_cast<Index>(jaccard_dissimilarity(counts).edges().size());
            return r;
        }
        if (format == "graph") {
            auto in = open_for_read(o.input);
            obs = observations_from_graph(read_distance_graph(in), settings.eta.value_or(0.0));
        } else if (format == "triplets") {
            auto in = open_for_read(o.input);
            try {
                obs = read_observations(in);
            } catch (const IoError& e) {
                throw IoError(o.input + ": " + e.what());
            }
        } else if (format == "matrix") {
            const SymmetricMatrix d = read_matrix_file(o.input);
            obs = sample_from_matrix(d, o, settings.eta.value_or(0.0), seed);
            if (!settings.eta) settings.eta = obs->noise_scale();
            write_obs_always = true;
        } else {
            throw InvalidArgument("unknown --format '" + format + "'");
        }
        *m_out = obs->m();
        return complete(*obs, settings);
    }();

    ensure_dir(out_dir);
    if (obs && write_obs_always) {
        write_file(out_dir / "observations.txt", [&](std::ostream& s) { write_observations(s, *obs); });
    }
    return result;
}

int cmd_complete(const Options& o) {
    const fs::path dir = o.output;
    Index m = 0;
    const CompletionResult r = run_completion(o, dir, &m, false);
    const Index dim = o.dim ? static_cast<Index>(*o.dim) : r.params.rank;
    write_file(dir / "D_star.csv", [&](std::ostream& s) { write_matrix_csv(s, r.d_star); });
    write_embedding(dir, r.d_star, dim);
    write_file(dir / "report.json", [&](std::ostream& s) { s << report_json(r, m).dump(2) << '\n'; });

    std::printf("n=%td m=%td rank=%td iterations=%d R_p=%.3e R_d=%.3e converged=%s\n",
                static_cast<std::ptrdiff_t>(r.d_star.size()), static_cast<std::ptrdiff_t>(m),
                static_cast<std::ptrdiff_t>(r.params.rank), r.report.iterations,
                r.report.residuals.primal, r.report.residuals.dual,
                r.report.converged ? "yes" : "no");
    if (!r.embedding.edm_scores.empty()) {
        std::printf("EDMscore(%td)=%.6f\n", static_cast<std::ptrdiff_t>(r.params.rank),
                    r.embedding.edm_scores[static_cast<std::size_t>(r.params.rank - 1)]);
    }
    if (!r.report.converged) {
        std::fprintf(stderr, "edmc: solver stopped at the iteration cap without reaching tol\n");
        return kNotConverged;
    }
    return kOk;
}

int cmd_embed(const Options& o) {
    if (o.input.empty()) throw InvalidArgument("--input is required");
    const fs::path dir = o.output;
    const std::string format = infer_format(o, "matrix");
    SymmetricMatrix d = SymmetricMatrix::zero(2);
    json report;
    int code = kOk;
    if (format == "matrix") {
        d = read_matrix_file(o.input);
        ensure_dir(dir);
    } else {
        Index m = 0;
        const CompletionResult r = run_completion(o, dir, &m, false);
        d = r.d_star;
        report = report_json(r, m);
        write_file(dir / "D_star.csv", [&](std::ostream& s) { write_matrix_csv(s, r.d_star); });
        if (!r.report.converged) code = kNotConverged;
    }
    const Index dim = o.dim ? static_cast<Index>(*o.dim) : 2;
    if (dim < 1 || dim > d.size()) {
        throw InvalidArgument("--dim " + std::to_string(dim) + " outside [1, " +
                              std::to_string(d.size()) + "]");
    }
    const EmbeddingResult e = cmds_embed(d, dim);
    write_file(dir / "coordinates.csv", [&](std::ostream& s) { write_coordinates_csv(s, e.points); });
    write_file(dir / "spectrum.csv", [&](std::ostream& s) { write_spectrum_csv(s, e.spectrum); });
    if (report.is_null()) {
        report["n"] = d.size();
        report["rank"] = dim;
        report["edm_scores"] = e.edm_scores;
    }
    report["dim"] = dim;
    write_file(dir / "report.json", [&](std::ostream& s) { s << report.dump(2) << '\n'; });
    if (!e.edm_scores.empty()) {
        std::printf("EDMscore(%td)=%.6f\n", static_cast<std::ptrdiff_t>(dim),
                    e.edm_scores[static_cast<std::size_t>(dim - 1)]);
    }
    return code;
}

int cmd_score(const Options& o) {
    if (o.input.empty()) throw InvalidArgument("--input is required");
    const SymmetricMatrix d = read_matrix_file(o.input);
    const Matrix& a = d.matrix();
    if (a.diagonal().cwiseAbs().maxCoeff() > 1e-8 * (1.0 + a.cwiseAbs().maxCoeff())) {
        throw InvalidArgument("input is not a distance matrix: nonzero diagonal");
    }
    const Spectrum s = spectral_decomposition(
        SymmetricMatrix::symmetrize(-detail::double_center(a)));
    const Index kmax = std::min<Index>(10, d.size());
    for (Index k = 1; k <= kmax; ++k) {
        std::printf("EDMscore(%td)=%.6f\n", static_cast<std::ptrdiff_t>(k), edm_score(s, k));
    }
    std::printf("numerical_rank=%td\n", static_cast<std::ptrdiff_t>(numerical_rank(s)));
    const EdmCheck check = is_edm(d, 1e-8);
    std::printf("is_edm=%s\n", check.is_edm ? "yes" : "no");
    return kOk;
}

int cmd_bench_bound(const Options& o) {
    std::uint64_t seed = 1;
    BenchBoundConfig config;
    config.settings = resolve_settings(o, &seed);
    config.settings.solver.log = nullptr;
    config.base_seed = seed;
    if (o.n > 0) config.n = static_cast<Index>(o.n);
    if (o.rank) config.r = static_cast<Index>(*o.rank);
    if (o.eta) config.eta = *o.eta;
    config.settings.eta.reset();
    if (!o.fractions.empty()) config.fractions = o.fractions;
    if (o.seeds > 0) config.seeds = o.seeds;
    config.noise = parse_noise_kind(o.noise);
    config.threads = o.threads;

    const BenchBoundSummary s = run_bench_bound(config);
    const fs::path dir = o.output;
    ensure_dir(dir);
    write_file(dir / "bench_bound.csv", [&](std::ostream& out) {
        out << "n,r,m,fraction,eta,seed,error,edm_score,iterations,wall_seconds,converged\n";
        for (const auto& r : s.records) {
            out << r.n << ',' << r.r << ',' << r.m << ',' << format_double(r.fraction) << ','
                << format_double(r.eta) << ',' << r.seed << ',' << format_double(r.error) << ','
                << format_double(r.edm_score) << ',' << r.iterations << ','
                << format_double(r.wall_seconds) << ',' << (r.converged ? 1 : 0) << '\n';
        }
    });
    json summary;
    summary["cells"] = json::array();
    std::printf("%10s %8s %14s\n", "fraction", "m", "median_error");
    for (const auto& c : s.cells) {
        summary["cells"].push_back({{"fraction", c.fraction}, {"m", c.m}, {"median_error", c.median_error}});
        std::printf("%10.3f %8td %14.6e\n", c.fraction, static_cast<std::ptrdiff_t>(c.m),
                    c.median_error);
    }
    summary["slope"] = s.slope;
    summary["strictly_decreasing"] = s.strictly_decreasing;
    write_file(dir / "bench_bound_summary.json", [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
    std::printf("slope=%.4f strictly_decreasing=%s\n", s.slope, s.strictly_decreasing ? "yes" : "no");
    return kOk;
}

int cmd_bench_alpha(const Options& o) {
    std::uint64_t seed = 1;
    BenchAlphaConfig config;
    config.settings = resolve_settings(o, &seed);
    config.settings.solver.log = nullptr;
    config.base_seed = seed;
    if (o.n > 0) config.n = static_cast<Index>(o.n);
    if (o.rank) config.r = static_cast<Index>(*o.rank);
    if (o.eta) config.eta = *o.eta;
    config.settings.eta.reset();
    if (!o.deltas.empty()) config.deltas = o.deltas;
    if (!o.fractions.empty()) config.fraction = o.fractions.front();
    if (o.seeds > 0) config.seeds = o.seeds;
    if (o.solve_seeds > 0) config.solve_seeds = o.solve_seeds;
    config.run_solves = config.solve_seeds > 0;
    config.threads = o.threads;

    const BenchAlphaSummary s = run_bench_alpha(config);
    const fs::path dir = o.output;
    ensure_dir(dir);
    write_file(dir / "bench_alpha_ordering.csv", [&](std::ostream& out) {
        out << "delta,trials,precondition_met,holds,alpha0,alpha1,alpha2,status\n";
        for (const auto& r : s.ordering) {
            const char* status = r.precondition_met == 0 ? "precondition unmet" : "checked";
            out << format_double(r.delta) << ',' << r.trials << ',' << r.precondition_met << ','
                << r.holds << ',' << format_double(r.mean_alpha0) << ','
                << format_double(r.mean_alpha1) << ',' << format_double(r.mean_alpha2) << ','
                << status << '\n';
        }
    });
    write_file(dir / "bench_alpha_rho2.csv", [&](std::ostream& out) {
        out << "rho2,seed_index,error\n";
        for (const auto& r : s.recovery)
            for (std::size_t k = 0; k < r.errors.size(); ++k)
                out << format_double(r.rho2) << ',' << k << ',' << format_double(r.errors[k]) << '\n';
    });

    std::printf("%8s %8s %8s  %s\n", "delta", "met", "holds", "mean alpha(0) alpha(1) alpha(2)");
    for (const auto& r : s.ordering) {
        if (r.precondition_met == 0) {
            std::printf("%8.3f %8d %8s  precondition unmet\n", r.delta, 0, "-");
        } else {
            std::printf("%8.3f %8d %8d  %.4f %.4f %.4f\n", r.delta, r.precondition_met, r.holds,
                        r.mean_alpha0, r.mean_alpha1, r.mean_alpha2);
        }
    }
    for (const auto& r : s.recovery) {
        std::printf("rho2=%.0f median_error=%.6e\n", r.rho2, r.median_error);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euclidean distance matrix completion"};
    app.require_subcommand(1);
    Options o;

    auto* complete_cmd = app.add_subcommand("complete", "Complete a partial distance matrix");
    complete_cmd->add_option("--input", o.input, "Observations, counts, graph or matrix file");
    complete_cmd->add_option("--format", o.format, "Input format (default from extension)")
        ->check(CLI::IsMember({"triplets", "counts", "graph", "matrix"}));
    complete_cmd->add_option("--output", o.output, "Output directory");
    complete_cmd->add_option("--dim", o.dim, "Embedding dimension (default: rank)");
    add_model_flags(*complete_cmd, o);
    add_sampling_flags(*complete_cmd, o);

    auto* embed_cmd = app.add_subcommand("embed", "Classical MDS coordinates and spectrum");
    embed_cmd->add_option("--input", o.input, "Distance matrix CSV or observations");
    embed_cmd->add_option("--format", o.format, "Input format (default from extension)")
        ->check(CLI::IsMember({"triplets", "counts", "graph", "matrix"}));
    embed_cmd->add_option("--output", o.output, "Output directory");
    embed_cmd->add_option("--dim", o.dim, "Embedding dimension k");
    add_model_flags(*embed_cmd, o);
    add_sampling_flags(*embed_cmd, o);

    auto* score_cmd = app.add_subcommand("score", "EDM scores and numerical rank of a matrix");
    score_cmd->add_option("--input", o.input, "Distance matrix CSV")->required();

    auto* bound_cmd = app.add_subcommand("bench-bound", "Error against sample size");
    bound_cmd->add_option("--n", o.n, "Number of points");
    bound_cmd->add_option("--fractions", o.fractions, "m / |Omega| per cell");
    bound_cmd->add_option("--seeds", o.seeds, "Seeds per cell");
    bound_cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    bound_cmd->add_option("--output", o.output, "Output directory");
    bound_cmd->add_option("--noise", o.noise, "Noise family")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}));
    bound_cmd->add_option("--seed", o.seed, "Base seed");
    add_model_flags(*bound_cmd, o);

    auto* alpha_cmd = app.add_subcommand("bench-alpha", "Subspace-reward ordering and rho2 presets");
    alpha_cmd->add_option("--n", o.n, "Number of points");
    alpha_cmd->add_option("--deltas", o.deltas, "||H|| / lambda_r per row");
    alpha_cmd->add_option("--seeds", o.seeds, "Perturbation trials per row");
    alpha_cmd->add_option("--solve-seeds", o.solve_seeds, "Instances per rho2 preset (0 skips)");
    alpha_cmd->add_option("--fractions", o.fractions, "m / |Omega| for the solves");
    alpha_cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    alpha_cmd->add_option("--output", o.output, "Output directory");
    alpha_cmd->add_option("--seed", o.seed, "Base seed");
    add_model_flags(*alpha_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }

    try {
        if (*complete_cmd) return cmd_complete(o);
        if (*embed_cmd) return cmd_embed(o);
        if (*score_cmd) return cmd_score(o);
        if (*bound_cmd) return cmd_bench_bound(o);
        if (*alpha_cmd) return cmd_bench_alpha(o);
    } catch (const DisconnectedGraph& e) {
        std::fprintf(stderr, "edmc: %s\n", e.what());
        return kDisconnected;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "edmc: %s (best residual %.3e)\n", e.what(), e.best_residual());
        return kNotConverged;
    } catch (const IoError& e) {
        std::fprintf(stderr, "edmc: %s\n", e.what());
        return kIo;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "edmc: %s\n", e.what());
        return kBadConfig;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "edmc: %s\n", e.what());
        return kNotConverged;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "edmc: %s\n", e.what());
        return 1;
    }
    return kBadConfig;
}
