// mlrtg — command-line driver for synthesis, basis caching, solving,
// diagnostics, evaluation and parameter sweeps.
//
// Exit codes: 0 success (including soft solver non-convergence),
//             2 usage error, 3 I/O error, 4 numeric/contract error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlrtg/io.hpp"
#include "mlrtg/metrics.hpp"
#include "mlrtg/solvers.hpp"
#include "mlrtg/spectral.hpp"
#include "mlrtg/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mlrtg;

namespace {

constexpr const char* kVersion = "1.0.0";

Shape parse_dims(const std::vector<Index>& v, const char* what) {
    if (v.empty()) throw CLI::ValidationError(std::string(what) + " must be non-empty");
    return Shape(v.begin(), v.end());
}

std::vector<Index> per_mode(std::vector<Index> v, int order, const char* what) {
    if (v.size() == 1) v.assign(static_cast<std::size_t>(order), v[0]);
    if (static_cast<int>(v.size()) != order)
        throw CLI::ValidationError(std::string(what) +
                                   " must have one entry (shared) or one per mode");
    return v;
}

void write_manifest(const fs::path& dir, json j) {
    j["version"] = kVersion;
    std::ofstream f(dir / "manifest.json");
    if (!f.good()) throw IoError("cannot write manifest: " + (dir / "manifest.json").string());
    f << j.dump(2) << "\n";
}

void write_report_csv(const fs::path& path, const SolverReport& r) {
    std::ofstream f(path);
    if (!f.good()) throw IoError("cannot write report: " + path.string());
    f << "iteration,objective,elapsed_seconds,converged\n";
    char buf[64];
    for (std::size_t i = 0; i < r.objective_trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.6f,%d", i, r.objective_trace[i],
                      i < r.trace_times.size() ? r.trace_times[i] : 0.0,
                      r.converged ? 1 : 0);
        f << buf << "\n";
    }
}

void write_matrix_as_dtf1(const fs::path& path, const Eigen::MatrixXd& m) {
    DenseTensor t({m.rows(), m.cols()});
    Eigen::Map<Eigen::MatrixXd>(t.data().data(), m.rows(), m.cols()) = m;
    write_dtf1(path, t);
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    std::vector<Index> shape;
    std::vector<Index> rank;
    std::vector<Index> basis_k;
    int method = 1;
    int knn = 10;
    std::uint64_t seed = 0;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double sparse_frac = -1.0;
    double sparse_std = 0.1;
    std::string out = ".";
};

int run_synth(const SynthArgs& a) {
    fs::create_directories(a.out);
    SynthSpec spec;
    spec.shape = parse_dims(a.shape, "--shape");
    const int order = static_cast<int>(spec.shape.size());
    spec.core_ranks = per_mode(a.rank, order, "--rank");
    if (!a.basis_k.empty()) spec.basis_ranks = per_mode(a.basis_k, order, "--basis-k");
    spec.k_nn = a.knn;
    spec.seed = a.seed;
    spec.method = a.method == 2 ? SynthSpec::Method::laplacian_filter
                                : SynthSpec::Method::direct_basis;

    DenseTensor y_star;
    if (spec.method == SynthSpec::Method::direct_basis) {
        Method1Result m1 = method1(spec);
        y_star = std::move(m1.y_star);
        write_dtf1(fs::path(a.out) / "core.dtf1", m1.core);
        for (std::size_t mu = 0; mu < m1.bases.size(); ++mu)
            write_basis(fs::path(a.out) / ("basis_mode" + std::to_string(mu + 1)),
                        m1.bases[mu]);
    } else {
        y_star = method2(spec);
    }
    write_dtf1(fs::path(a.out) / "y_star.dtf1", y_star);

    DenseTensor y = y_star;
    if (!std::isnan(a.snr_db)) y = add_gaussian_noise(y, a.snr_db, a.seed);
    if (a.sparse_frac >= 0.0) y = add_sparse_noise(y, a.sparse_frac, a.sparse_std, a.seed);
    write_dtf1(fs::path(a.out) / "y.dtf1", y);

    json j;
    j["command"] = "synth";
    j["options"] = {{"shape", a.shape},
                    {"rank", a.rank},
                    {"basis_k", a.basis_k},
                    {"method", a.method},
                    {"knn", a.knn},
                    {"seed", a.seed},
                    {"snr_db", std::isnan(a.snr_db) ? json(nullptr) : json(a.snr_db)},
                    {"sparse_frac", a.sparse_frac},
                    {"sparse_std", a.sparse_std}};
    j["outputs"] = {{"y_star", file_hash_hex(fs::path(a.out) / "y_star.dtf1")},
                    {"y", file_hash_hex(fs::path(a.out) / "y.dtf1")}};
    write_manifest(a.out, j);
    return 0;
}

// ---------------------------------------------------------------- basis ----

struct BasisArgs {
    std::string input;
    Index k = 0;
    int knn = 10;
    double kernel_width = 0.0;
    Index kstar = 0;
    std::string out = ".";
};

GraphBasis cached_mode_basis(const DenseTensor& t, int mu, Index k, int knn,
                             double width, const std::string& input_hash) {
    const char* cache_env = std::getenv("MLRTG_CACHE_DIR");
    fs::path stem;
    if (cache_env != nullptr) {
        char key[160];
        std::snprintf(key, sizeof(key), "%s_m%d_k%lld_nn%d_w%.17g", input_hash.c_str(),
                      mu, static_cast<long long>(k), knn, width);
        stem = fs::path(cache_env) / key;
        if (fs::exists(stem.string() + ".vectors.dtf1")) {
            std::cout << "basis cache hit (mode " << mu << ")\n";
            return read_basis(stem);
        }
        std::cout << "basis cache miss (mode " << mu << ")\n";
    }
    const ModeMatrix ym = matricize(t, mu);
    const WeightedGraph g = knn_graph(ym.data, knn, width);
    GraphBasis b = smallest_eigs(combinatorial_laplacian(g), k);
    if (cache_env != nullptr) {
        fs::create_directories(cache_env);
        write_basis(stem, b);
    }
    return b;
}

int run_basis(const BasisArgs& a) {
    fs::create_directories(a.out);
    const DenseTensor t = read_dtf1(a.input);
    const std::string input_hash = file_hash_hex(a.input);

    std::vector<double> gaps;
    for (int mu = 1; mu <= t.order(); ++mu) {
        if (a.k > t.dim(mu)) throw RankError("basis: k exceeds mode row count");
        const GraphBasis b =
            cached_mode_basis(t, mu, a.k, a.knn, a.kernel_width, input_hash);
        write_basis(fs::path(a.out) / ("basis_mode" + std::to_string(mu)), b);
        if (a.kstar > 0) gaps.push_back(eigen_gap(b, a.kstar));
    }
    if (a.kstar > 0) {
        Eigen::MatrixXd g(static_cast<Index>(gaps.size()), 2);
        for (Index mu = 0; mu < g.rows(); ++mu) {
            g(mu, 0) = static_cast<double>(mu + 1);
            g(mu, 1) = gaps[static_cast<std::size_t>(mu)];
        }
        write_matrix_csv(fs::path(a.out) / "gaps.csv", g);
    }

    json j;
    j["command"] = "basis";
    j["options"] = {{"input", a.input}, {"k", a.k},     {"knn", a.knn},
                    {"kernel_width", a.kernel_width},   {"kstar", a.kstar}};
    j["input_hashes"] = {{"input", input_hash}};
    write_manifest(a.out, j);
    return 0;
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
    std::string algorithm;
    std::string input;
    std::string bases_dir;
    std::vector<Index> core;
    double gamma = 1.0;
    double alpha = 1.0;
    int knn = 10;
    int max_iters = 500;
    double tol = 1e-6;
    double beta = 1.0;
    double step = 0.0;
    std::string out = ".";
};

struct SolveProducts {
    DenseTensor recovered;
    SolverReport report;
    std::vector<Eigen::MatrixXd> factors;  // may be empty (gctp)
    std::optional<DenseTensor> sparse;
};

std::vector<GraphBasis> load_or_build_bases(const SolveArgs& a, const DenseTensor& y,
                                            const std::vector<Index>& ranks) {
    std::vector<GraphBasis> bases;
    if (!a.bases_dir.empty()) {
        for (int mu = 1; mu <= y.order(); ++mu)
            bases.push_back(
                read_basis(fs::path(a.bases_dir) / ("basis_mode" + std::to_string(mu))));
        for (int mu = 1; mu <= y.order(); ++mu) {
            if (bases[static_cast<std::size_t>(mu - 1)].n() != y.dim(mu))
                throw ShapeError("solve: basis vertex count mismatch");
            if (bases[static_cast<std::size_t>(mu - 1)].k() <
                ranks[static_cast<std::size_t>(mu - 1)])
                throw RankError("solve: basis has fewer columns than --core");
            // truncate to the requested core rank
            GraphBasis& b = bases[static_cast<std::size_t>(mu - 1)];
            const Index k = ranks[static_cast<std::size_t>(mu - 1)];
            b.eigenvectors = b.eigenvectors.leftCols(k).eval();
            b.eigenvalues = b.eigenvalues.head(k).eval();
        }
        return bases;
    }
    for (int mu = 1; mu <= y.order(); ++mu) {
        const ModeMatrix ym = matricize(y, mu);
        const WeightedGraph g = knn_graph(ym.data, a.knn);
        bases.push_back(smallest_eigs(combinatorial_laplacian(g),
                                      ranks[static_cast<std::size_t>(mu - 1)]));
    }
    return bases;
}

SolveProducts run_algorithm(const SolveArgs& a, const DenseTensor& y) {
    SolverOptions opts;
    opts.max_iters = a.max_iters;
    opts.tol = a.tol;
    opts.beta = a.beta;
    opts.step = a.step;

    const std::vector<Index> ranks = per_mode(a.core, y.order(), "--core");
    SolveProducts p;

    if (a.algorithm == "mlsvd") {
        auto [f, report] = mlsvd(y, ranks, opts);
        p.recovered = multilinear_transform(f.core, f.factors);
        p.factors = std::move(f.factors);
        p.report = std::move(report);
        write_dtf1(fs::path(a.out) / "core.dtf1", f.core);
        return p;
    }

    const std::vector<GraphBasis> bases = load_or_build_bases(a, y, ranks);
    std::vector<WeightVector> weights;
    for (const GraphBasis& b : bases)
        weights.push_back(make_weights(b.eigenvalues, a.gamma, a.alpha));

    if (a.algorithm == "gctp") {
        const GctDecomposition proj = project_gct(y, bases);
        auto [core, report] = gctp(proj.core, weights, opts);
        p.recovered = lift_core(core, bases);
        p.report = std::move(report);
        write_dtf1(fs::path(a.out) / "core.dtf1", core);
    } else if (a.algorithm == "gmlsvd") {
        auto [f, report] = gmlsvd(y, bases, weights, opts);
        p.recovered = multilinear_transform(f.core, f.factors);
        p.factors = std::move(f.factors);
        p.report = std::move(report);
        write_dtf1(fs::path(a.out) / "core.dtf1", f.core);
    } else if (a.algorithm == "trpcag") {
        TrpcagResult r = trpcag(y, bases, weights, opts);
        p.recovered = std::move(r.lowrank);
        p.sparse = std::move(r.sparse);
        p.report = std::move(r.report);
        write_dtf1(fs::path(a.out) / "core.dtf1", r.core);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(matricize(r.core, 1).data,
                                              Eigen::ComputeThinU);
        p.factors.push_back(bases[0].eigenvectors * svd.matrixU());
    } else {
        throw CLI::ValidationError("unknown --algorithm: " + a.algorithm);
    }
    return p;
}

int run_solve(const SolveArgs& a) {
    fs::create_directories(a.out);
    const DenseTensor y = read_dtf1(a.input);
    SolveProducts p = run_algorithm(a, y);

    write_dtf1(fs::path(a.out) / "recovered.dtf1", p.recovered);
    for (std::size_t mu = 0; mu < p.factors.size(); ++mu)
        write_matrix_as_dtf1(
            fs::path(a.out) / ("factor_mode" + std::to_string(mu + 1) + ".dtf1"),
            p.factors[mu]);
    if (p.sparse) write_dtf1(fs::path(a.out) / "sparse.dtf1", *p.sparse);
    write_report_csv(fs::path(a.out) / "report.csv", p.report);

    json j;
    j["command"] = "solve";
    j["options"] = {{"algorithm", a.algorithm}, {"input", a.input},
                    {"bases", a.bases_dir},     {"core", a.core},
                    {"gamma", a.gamma},         {"alpha", a.alpha},
                    {"knn", a.knn},             {"max_iters", a.max_iters},
                    {"tol", a.tol},             {"beta", a.beta},
                    {"step", a.step}};
    j["input_hashes"] = {{"input", file_hash_hex(a.input)}};
    j["result"] = {{"converged", p.report.converged},
                   {"iterations", p.report.iterations},
                   {"objective", p.report.objective_trace.empty()
                                     ? json(nullptr)
                                     : json(p.report.objective_trace.back())}};
    write_manifest(a.out, j);
    if (!p.report.converged)
        std::cout << "solver did not converge within max_iters (soft failure)\n";
    return 0;
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
    SolveArgs base;
    std::string param;
    std::vector<double> grid;
    std::string clean;
    Index kstar = 30;
    Index count = 5;
};

int run_sweep(const SweepArgs& s) {
    if (s.grid.empty()) throw CLI::ValidationError("--grid must be non-empty");
    fs::create_directories(s.base.out);
    const DenseTensor y = read_dtf1(s.base.input);
    const DenseTensor clean = read_dtf1(s.clean);

    // clean mode-1 singular vectors for alignment metrics
    Eigen::JacobiSVD<Eigen::MatrixXd> clean_svd(matricize(clean, 1).data,
                                                Eigen::ComputeThinU);

    std::ofstream f(fs::path(s.base.out) / "sweep.csv");
    if (!f.good()) throw IoError("cannot write sweep.csv");
    f << "param,value,recon_error,sv_error,subspace_angle,align_mean,converged,"
         "iterations,wall_time\n";

    for (double v : s.grid) {
        SolveArgs a = s.base;
        a.out = (fs::path(s.base.out) / ("point_" + std::to_string(v))).string();
        fs::create_directories(a.out);
        if (s.param == "gamma") {
            a.gamma = v;
        } else if (s.param == "alpha") {
            a.alpha = v;
        } else if (s.param == "k") {
            a.core.assign(static_cast<std::size_t>(y.order()), static_cast<Index>(v));
            a.bases_dir.clear();  // cached bases may be narrower than this k
        } else if (s.param == "knn") {
            a.knn = static_cast<int>(v);
            a.bases_dir.clear();  // knn changes force a rebuild
        } else {
            throw CLI::ValidationError("unknown --param: " + s.param);
        }
        SolveProducts p = run_algorithm(a, y);

        const double rerr = recon_error(p.recovered, clean);
        const Index maxr = std::min(matricize(clean, 1).data.rows(),
                                    matricize(clean, 1).data.cols());
        const Index kstar = std::min(s.kstar, maxr);
        const double serr = singular_value_error(p.recovered, clean, 1, kstar);
        double angle = std::nan("");
        double align = std::nan("");
        if (!p.factors.empty() &&
            p.factors[0].cols() >= s.count) {
            const Eigen::MatrixXd u = clean_svd.matrixU().leftCols(s.count);
            angle = subspace_angle(p.factors[0].leftCols(s.count), u, s.count);
            align = alignment_diag(p.factors[0].leftCols(s.count), u, s.count).mean();
        }
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.6f",
                      s.param.c_str(), v, rerr, serr, angle, align,
                      p.report.converged ? 1 : 0, p.report.iterations,
                      p.report.wall_time);
        f << row << "\n";
    }
    json j;
    j["command"] = "sweep";
    j["options"] = {{"param", s.param}, {"grid", s.grid}, {"clean", s.clean}};
    j["input_hashes"] = {{"input", file_hash_hex(s.base.input)},
                         {"clean", file_hash_hex(s.clean)}};
    write_manifest(s.base.out, j);
    return 0;
}

// -------------------------------------------------------------- diagnose ----

struct DiagnoseArgs {
    std::string input;
    std::string bases_dir;
    std::vector<Index> kgrid;
    int knn = 10;
    std::string out = ".";
};

int run_diagnose(const DiagnoseArgs& a) {
    fs::create_directories(a.out);
    const DenseTensor t = read_dtf1(a.input);
    if (a.kgrid.empty()) throw CLI::ValidationError("--kgrid must be non-empty");

    std::ofstream f(fs::path(a.out) / "diagnostics.csv");
    if (!f.good()) throw IoError("cannot write diagnostics.csv");
    f << "mode,stationarity_ratio";
    for (Index k : a.kgrid) f << ",conc_at_" << k;
    f << "\n";

    for (int mu = 1; mu <= t.order(); ++mu) {
        const ModeMatrix ym = matricize(t, mu);
        const Index n = ym.data.rows();
        GraphBasis b;
        if (!a.bases_dir.empty()) {
            b = read_basis(fs::path(a.bases_dir) / ("basis_mode" + std::to_string(mu)));
        } else {
            // full eigenbasis at desk scale, else the largest requested k
            const Index kbasis = n <= 500 ? n : std::min<Index>(
                n, *std::max_element(a.kgrid.begin(), a.kgrid.end()));
            const WeightedGraph g = knn_graph(ym.data, a.knn);
            b = smallest_eigs(combinatorial_laplacian(g), kbasis);
        }
        const GscMatrix gm = gsc(ym, b);
        f << mu << ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", stationarity_ratio(gm));
        f << buf;
        for (Index k : a.kgrid) {
            std::snprintf(buf, sizeof(buf), ",%.17g",
                          energy_concentration(gm, std::min(k, gm.basis_size_used)));
            f << buf;
        }
        f << "\n";
    }
    json j;
    j["command"] = "diagnose";
    j["options"] = {{"input", a.input}, {"bases", a.bases_dir}, {"knn", a.knn},
                    {"kgrid", a.kgrid}};
    j["input_hashes"] = {{"input", file_hash_hex(a.input)}};
    write_manifest(a.out, j);
    return 0;
}

// ------------------------------------------------------------------ eval ----

struct EvalArgs {
    std::string input;
    std::string reference;
    std::string factors;
    std::string ref_factors;
    int mode = 1;
    Index kstar = 30;
    Index count = 5;
    std::string out = "eval.csv";
};

int run_eval(const EvalArgs& a) {
    const DenseTensor y = read_dtf1(a.input);
    const DenseTensor ref = read_dtf1(a.reference);

    std::ofstream f(a.out);
    if (!f.good()) throw IoError("cannot write " + a.out);
    f << "metric,value\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", recon_error(y, ref));
    f << "recon_error," << buf << "\n";

    const ModeMatrix rm = matricize(ref, a.mode);
    const Index maxr = std::min(rm.data.rows(), rm.data.cols());
    std::snprintf(buf, sizeof(buf), "%.17g",
                  singular_value_error(y, ref, a.mode, std::min(a.kstar, maxr)));
    f << "singular_value_error," << buf << "\n";

    if (!a.factors.empty() && !a.ref_factors.empty()) {
        const DenseTensor vt = read_dtf1(a.factors);
        const DenseTensor ut = read_dtf1(a.ref_factors);
        const Eigen::MatrixXd v =
            Eigen::Map<const Eigen::MatrixXd>(vt.data().data(), vt.dim(1), vt.dim(2));
        const Eigen::MatrixXd u =
            Eigen::Map<const Eigen::MatrixXd>(ut.data().data(), ut.dim(1), ut.dim(2));
        std::snprintf(buf, sizeof(buf), "%.17g", subspace_angle(v, u, a.count));
        f << "subspace_angle," << buf << "\n";
        const Eigen::VectorXd d = alignment_diag(v, u, a.count);
        for (Index i = 0; i < d.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", d[i]);
            f << "alignment_" << (i + 1) << "," << buf << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilinear low-rank tensor decompositions on graph eigenbases"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SynthArgs sy;
    auto* synth_cmd = app.add_subcommand("synth", "generate artificial tensors");
    synth_cmd->add_option("--shape", sy.shape, "tensor dimensions, e.g. 100,100")
        ->required()
        ->delimiter(',');
    synth_cmd->add_option("--rank", sy.rank, "core rank per mode (or one shared)")
        ->required()
        ->delimiter(',');
    synth_cmd->add_option("--basis-k", sy.basis_k, "eigenvectors to emit (>= rank)")
        ->delimiter(',');
    synth_cmd->add_option("--method", sy.method)->check(CLI::IsMember({1, 2}));
    synth_cmd->add_option("--knn", sy.knn);
    synth_cmd->add_option("--seed", sy.seed);
    synth_cmd->add_option("--snr-db", sy.snr_db, "add Gaussian noise at this SNR");
    synth_cmd->add_option("--sparse-frac", sy.sparse_frac, "add sparse noise");
    synth_cmd->add_option("--sparse-std", sy.sparse_std);
    synth_cmd->add_option("--out", sy.out);

    BasisArgs ba;
    auto* basis_cmd = app.add_subcommand("basis", "build and cache mode eigenbases");
    basis_cmd->add_option("--input", ba.input)->required();
    basis_cmd->add_option("--k", ba.k)->required();
    basis_cmd->add_option("--knn", ba.knn);
    basis_cmd->add_option("--kernel-width", ba.kernel_width);
    basis_cmd->add_option("--kstar", ba.kstar, "report eigen gaps at this index");
    basis_cmd->add_option("--out", ba.out);

    SolveArgs so;
    auto* solve_cmd = app.add_subcommand("solve", "run a decomposition solver");
    solve_cmd->set_config("--config", "", "key = value file; flags take precedence");
    solve_cmd->add_option("--algorithm", so.algorithm)
        ->required()
        ->check(CLI::IsMember({"gctp", "gmlsvd", "trpcag", "mlsvd"}));
    solve_cmd->add_option("--input", so.input)->required();
    solve_cmd->add_option("--bases", so.bases_dir, "directory with basis_mode* files");
    solve_cmd->add_option("--core", so.core, "core size per mode (or one shared)")
        ->required()
        ->delimiter(',');
    solve_cmd->add_option("--gamma", so.gamma);
    solve_cmd->add_option("--alpha", so.alpha);
    solve_cmd->add_option("--knn", so.knn);
    solve_cmd->add_option("--max-iters", so.max_iters);
    solve_cmd->add_option("--tol", so.tol);
    solve_cmd->add_option("--beta", so.beta);
    solve_cmd->add_option("--step", so.step);
    solve_cmd->add_option("--out", so.out);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid-run a solver and emit metrics");
    sweep_cmd->set_config("--config", "", "key = value file; flags take precedence");
    sweep_cmd->add_option("--param", sw.param)
        ->required()
        ->check(CLI::IsMember({"gamma", "k", "alpha", "knn"}));
    sweep_cmd->add_option("--grid", sw.grid)
        ->required()
        ->delimiter(',')
        ->check(CLI::Number);
    sweep_cmd->add_option("--clean", sw.clean, "clean reference tensor")->required();
    sweep_cmd->add_option("--kstar", sw.kstar);
    sweep_cmd->add_option("--count", sw.count);
    sweep_cmd->add_option("--algorithm", sw.base.algorithm)
        ->required()
        ->check(CLI::IsMember({"gctp", "gmlsvd", "trpcag", "mlsvd"}));
    sweep_cmd->add_option("--input", sw.base.input)->required();
    sweep_cmd->add_option("--bases", sw.base.bases_dir);
    sweep_cmd->add_option("--core", sw.base.core)->delimiter(',');
    sweep_cmd->add_option("--gamma", sw.base.gamma);
    sweep_cmd->add_option("--alpha", sw.base.alpha);
    sweep_cmd->add_option("--knn", sw.base.knn);
    sweep_cmd->add_option("--max-iters", sw.base.max_iters);
    sweep_cmd->add_option("--tol", sw.base.tol);
    sweep_cmd->add_option("--out", sw.base.out);

    DiagnoseArgs di;
    auto* diag_cmd = app.add_subcommand("diagnose", "stationarity and concentration");
    diag_cmd->add_option("--input", di.input)->required();
    diag_cmd->add_option("--bases", di.bases_dir, "directory with basis_mode* files");
    diag_cmd->add_option("--kgrid", di.kgrid)->required()->delimiter(',');
    diag_cmd->add_option("--knn", di.knn);
    diag_cmd->add_option("--out", di.out);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "metrics between two tensors");
    eval_cmd->add_option("--input", ev.input)->required();
    eval_cmd->add_option("--reference", ev.reference)->required();
    eval_cmd->add_option("--factors", ev.factors);
    eval_cmd->add_option("--ref-factors", ev.ref_factors);
    eval_cmd->add_option("--mode", ev.mode);
    eval_cmd->add_option("--kstar", ev.kstar);
    eval_cmd->add_option("--count", ev.count);
    eval_cmd->add_option("--out", ev.out);

    try {
        app.parse(argc, argv);
        if (synth_cmd->parsed()) return run_synth(sy);
        if (basis_cmd->parsed()) return run_basis(ba);
        if (solve_cmd->parsed()) return run_solve(so);
        if (sweep_cmd->parsed()) return run_sweep(sw);
        if (diag_cmd->parsed()) return run_diagnose(di);
        if (eval_cmd->parsed()) return run_eval(ev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
