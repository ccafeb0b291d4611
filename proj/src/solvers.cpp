#include "mlrtg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace mlrtg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Eigen::MatrixXd> basis_matrices(const std::vector<GraphBasis>& bases) {
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(bases.size());
    for (const GraphBasis& b : bases) mats.push_back(b.eigenvectors);
    return mats;
}

void check_beta(double beta) {
    if (!(beta >= 0.1 && beta <= 1.9))
        throw Error("solver: relaxation beta must lie in [0.1, 1.9]");
}

double total_weighted_nuclear(const DenseTensor& x,
                              const std::vector<WeightVector>& weights) {
    double total = 0.0;
    for (int mu = 1; mu <= x.order(); ++mu)
        total += weighted_nuclear_norm(matricize(x, mu).data,
                                       weights[static_cast<std::size_t>(mu - 1)]);
    return total;
}

DenseTensor svt_mode(const DenseTensor& x, int mode, const WeightVector& w,
                     double scale) {
    ModeMatrix m = matricize(x, mode);
    WeightVector scaled = w;
    scaled.values *= scale;
    m.data = weighted_svt(m.data, scaled);
    return fold(m, mode, x.shape());
}

// Parallel proximal splitting (PPXA) over f_0 + f_1 + ... + f_d with uniform
// weights. `prox[i]` must evaluate prox_{s * f_i}; `objective` is the full
// objective. Tracks the incumbent (lowest-objective) iterate; the reported
// trace and the returned tensor refer to it, so the trace is non-increasing.
std::pair<DenseTensor, SolverReport> ppxa(
    const DenseTensor& x0,
    const std::vector<std::function<DenseTensor(const DenseTensor&)>>& prox,
    const std::function<double(const DenseTensor&)>& objective,
    const SolverOptions& opts) {
    const auto t0 = Clock::now();
    check_beta(opts.beta);

    SolverReport report;
    report.tolerance_used = opts.tol;

    const std::size_t m = prox.size();
    std::vector<DenseTensor> z(m, x0);
    DenseTensor w = x0;

    DenseTensor best = x0;
    double best_obj = objective(x0);
    report.objective_trace.push_back(best_obj);
    report.trace_times.push_back(seconds_since(t0));

    for (int it = 1; it <= opts.max_iters; ++it) {
        std::vector<DenseTensor> p;
        p.reserve(m);
        for (std::size_t i = 0; i < m; ++i) p.push_back(prox[i](z[i]));

        Eigen::VectorXd bar = Eigen::VectorXd::Zero(x0.size());
        for (const DenseTensor& pi : p) bar += pi.data();
        bar /= static_cast<double>(m);

        for (std::size_t i = 0; i < m; ++i)
            z[i].data() += opts.beta * (2.0 * bar - w.data() - p[i].data());
        w.data() += opts.beta * (bar - w.data());

        const double obj = objective(w);
        if (obj < best_obj) {
            best_obj = obj;
            best = w;
        }
        report.objective_trace.push_back(best_obj);
        report.trace_times.push_back(seconds_since(t0));
        report.iterations = it;

        const auto& tr = report.objective_trace;
        if (it >= opts.window) {
            const double prev = tr[tr.size() - 1 - static_cast<std::size_t>(opts.window)];
            const double cur = tr.back();
            if (std::abs(prev - cur) <= opts.tol * std::max(1e-12, std::abs(cur))) {
                report.converged = true;
                break;
            }
        }
    }
    report.wall_time = seconds_since(t0);
    return {std::move(best), std::move(report)};
}

void check_mode_weights(const DenseTensor& core,
                        const std::vector<WeightVector>& weights) {
    if (static_cast<int>(weights.size()) != core.order())
        throw ShapeError("solver: one weight vector per mode required");
    for (int mu = 1; mu <= core.order(); ++mu) {
        const auto& w = weights[static_cast<std::size_t>(mu - 1)];
        const Index other = core.size() / core.dim(mu);
        if (w.values.size() < std::min(core.dim(mu), other))
            throw RankError("solver: weight vector shorter than mode rank");
    }
}

}  // namespace

WeightVector make_weights(const Eigen::VectorXd& eigenvalues, double gamma,
                          double alpha) {
    if (gamma < 0.0) throw Error("make_weights: gamma must be >= 0");
    if (alpha < 1.0) throw Error("make_weights: alpha must be >= 1");
    WeightVector w;
    w.alpha = alpha;
    w.gamma = gamma;
    Eigen::ArrayXd g = eigenvalues.array().max(0.0).pow(alpha);
    const double mass = g.sum();
    if (mass > 0.0) g /= mass;  // unit total mass; weights sum to gamma
    w.values = (gamma * g).matrix();
    return w;
}

Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& m, const WeightVector& thresholds) {
    if (!m.allFinite()) throw NumericError("weighted_svt: non-finite entries");
    const Index r = std::min(m.rows(), m.cols());
    if (thresholds.values.size() < r)
        throw RankError("weighted_svt: need at least min(rows, cols) thresholds");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues();
    for (Index i = 0; i < r; ++i) s[i] = std::max(s[i] - thresholds.values[i], 0.0);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

double weighted_nuclear_norm(const Eigen::MatrixXd& m, const WeightVector& weights) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();
    if (weights.values.size() < s.size())
        throw RankError("weighted_nuclear_norm: too few weights");
    return weights.values.head(s.size()).dot(s);
}

std::pair<DenseTensor, SolverReport> gctp(const DenseTensor& x_hat,
                                          const std::vector<WeightVector>& weights,
                                          const SolverOptions& opts) {
    check_mode_weights(x_hat, weights);

    const bool all_zero_gamma = [&] {
        for (const auto& w : weights)
            if (w.values.size() > 0 && w.values.maxCoeff() > 0.0) return false;
        return true;
    }();
    if (all_zero_gamma) {
        // Unconstrained quadratic: x_hat is already the minimizer.
        SolverReport report;
        report.converged = true;
        report.tolerance_used = opts.tol;
        report.objective_trace = {0.0};
        return {x_hat, report};
    }

    SolverOptions o = opts;
    if (o.step <= 0.0) o.step = 1.0;
    const double s = o.step;

    std::vector<std::function<DenseTensor(const DenseTensor&)>> prox;
    prox.emplace_back([&x_hat, s](const DenseTensor& v) {
        DenseTensor out = v;
        out.data() = (v.data() + 2.0 * s * x_hat.data()) / (1.0 + 2.0 * s);
        return out;
    });
    for (int mu = 1; mu <= x_hat.order(); ++mu)
        prox.emplace_back([mu, s, &weights](const DenseTensor& v) {
            return svt_mode(v, mu, weights[static_cast<std::size_t>(mu - 1)], s);
        });

    auto objective = [&](const DenseTensor& x) {
        return (x_hat.data() - x.data()).squaredNorm() + total_weighted_nuclear(x, weights);
    };
    return ppxa(x_hat, prox, objective, o);
}

std::pair<SvdFactors, SolverReport> mlsvd(const DenseTensor& y,
                                          const std::vector<Index>& ranks,
                                          const SolverOptions& opts) {
    const auto t0 = Clock::now();
    const int d = y.order();
    if (static_cast<int>(ranks.size()) != d)
        throw RankError("mlsvd: one rank per mode required");
    for (int mu = 1; mu <= d; ++mu) {
        const Index r = ranks[static_cast<std::size_t>(mu - 1)];
        if (r < 1 || r > y.dim(mu)) throw RankError("mlsvd: rank out of range");
    }

    SolverReport report;
    report.tolerance_used = 1e-8;
    const double ynorm = y.norm();

    // Truncated HOSVD initialization.
    std::vector<Eigen::MatrixXd> factors(static_cast<std::size_t>(d));
    for (int mu = 1; mu <= d; ++mu) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(matricize(y, mu).data, Eigen::ComputeThinU);
        factors[static_cast<std::size_t>(mu - 1)] =
            svd.matrixU().leftCols(ranks[static_cast<std::size_t>(mu - 1)]);
    }

    auto fit_residual = [&](const std::vector<Eigen::MatrixXd>& fs) {
        const DenseTensor core = multilinear_transform(y, fs, /*transpose=*/true);
        const double goal = ynorm * ynorm - core.data().squaredNorm();
        return std::sqrt(std::max(goal, 0.0));
    };

    double prev = fit_residual(factors);
    report.objective_trace.push_back(prev);
    report.trace_times.push_back(seconds_since(t0));

    const int max_sweeps = std::min(50, opts.max_iters);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int mu = 1; mu <= d; ++mu) {
            // Contract every other mode, then refresh this mode's basis.
            DenseTensor z = y;
            for (int nu = 1; nu <= d; ++nu)
                if (nu != mu)
                    z = mode_product(z, nu,
                                     factors[static_cast<std::size_t>(nu - 1)].transpose());
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(matricize(z, mu).data,
                                                  Eigen::ComputeThinU);
            factors[static_cast<std::size_t>(mu - 1)] =
                svd.matrixU().leftCols(ranks[static_cast<std::size_t>(mu - 1)]);
        }
        const double cur = fit_residual(factors);
        report.objective_trace.push_back(cur);
        report.trace_times.push_back(seconds_since(t0));
        report.iterations = sweep;
        if (prev - cur <= report.tolerance_used * std::max(1.0, ynorm)) {
            report.converged = true;
            break;
        }
        prev = cur;
    }
    if (report.objective_trace.size() <= 1) report.converged = true;

    for (auto& f : factors) normalize_signs(f);
    SvdFactors out;
    out.core = multilinear_transform(y, factors, /*transpose=*/true);
    out.factors = std::move(factors);
    report.wall_time = seconds_since(t0);
    return {std::move(out), std::move(report)};
}

std::pair<SvdFactors, SolverReport> gmlsvd(const DenseTensor& y,
                                           const std::vector<GraphBasis>& bases,
                                           const std::vector<WeightVector>& weights,
                                           const SolverOptions& opts) {
    const auto t0 = Clock::now();
    GctDecomposition proj = project_gct(y, bases);
    auto [core, report] = gctp(proj.core, weights, opts);

    std::vector<Index> full_ranks;
    for (Index r : core.shape()) full_ranks.push_back(r);
    auto [inner, inner_report] = mlsvd(core, full_ranks);

    SvdFactors out;
    out.core = std::move(inner.core);
    out.factors.reserve(bases.size());
    for (std::size_t mu = 0; mu < bases.size(); ++mu)
        out.factors.push_back(bases[mu].eigenvectors * inner.factors[mu]);

    report.converged = report.converged && inner_report.converged;
    report.wall_time = seconds_since(t0);
    return {std::move(out), std::move(report)};
}

DenseTensor prox_l1_dataterm(const DenseTensor& x_core, const DenseTensor& y,
                             const std::vector<GraphBasis>& bases, double step) {
    if (static_cast<int>(bases.size()) != x_core.order())
        throw ShapeError("prox_l1_dataterm: one basis per mode required");
    for (int mu = 1; mu <= x_core.order(); ++mu) {
        if (bases[static_cast<std::size_t>(mu - 1)].k() != x_core.dim(mu))
            throw ShapeError("prox_l1_dataterm: core shape mismatch");
        if (bases[static_cast<std::size_t>(mu - 1)].n() != y.dim(mu))
            throw ShapeError("prox_l1_dataterm: data shape mismatch");
    }
    const auto mats = basis_matrices(bases);
    DenseTensor resid = multilinear_transform(x_core, mats, /*transpose=*/false);
    resid.data() -= y.data();
    // Omega(r, a) - r = -clamp(r, -a, a)
    DenseTensor clipped = resid;
    clipped.data() = resid.data().cwiseMax(-step).cwiseMin(step);
    DenseTensor corr = multilinear_transform(clipped, mats, /*transpose=*/true);
    DenseTensor out = x_core;
    out.data() -= corr.data();
    return out;
}

TrpcagResult trpcag(const DenseTensor& y, const std::vector<GraphBasis>& bases,
                    const std::vector<WeightVector>& weights,
                    const SolverOptions& opts) {
    const auto t0 = Clock::now();
    GctDecomposition proj = project_gct(y, bases);
    check_mode_weights(proj.core, weights);

    SolverOptions o = opts;
    if (o.step <= 0.0) {
        double gmax = 0.0;
        for (const auto& w : weights) gmax = std::max(gmax, w.gamma);
        o.step = gmax > 0.0 ? 1.0 / gmax : 1.0;
    }
    const double s = o.step;
    const auto mats = basis_matrices(bases);

    std::vector<std::function<DenseTensor(const DenseTensor&)>> prox;
    prox.emplace_back([&y, &bases, s](const DenseTensor& v) {
        return prox_l1_dataterm(v, y, bases, s);
    });
    for (int mu = 1; mu <= proj.core.order(); ++mu)
        prox.emplace_back([mu, s, &weights](const DenseTensor& v) {
            return svt_mode(v, mu, weights[static_cast<std::size_t>(mu - 1)], s);
        });

    auto objective = [&](const DenseTensor& x) {
        DenseTensor rec = multilinear_transform(x, mats, /*transpose=*/false);
        return (rec.data() - y.data()).lpNorm<1>() + total_weighted_nuclear(x, weights);
    };

    auto [core, report] = ppxa(proj.core, prox, objective, o);

    TrpcagResult out;
    out.lowrank = multilinear_transform(core, mats, /*transpose=*/false);
    out.core = std::move(core);
    out.sparse = y;
    out.sparse.data() -= out.lowrank.data();
    out.report = std::move(report);
    out.report.wall_time = seconds_since(t0);
    return out;
}

}  // namespace mlrtg
