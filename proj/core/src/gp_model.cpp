#include "latentgp/gp_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "latentgp/errors.hpp"
#include "latentgp/rng.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct Factorization {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

// Cholesky with escalating diagonal jitter. The matrix is expected to
// be positive definite already (noise variance is on the diagonal); the
// escalation only rescues borderline conditioning during optimization.
Factorization factor_with_jitter(const Eigen::MatrixXd& k_y) {
    // LLT does not reliably flag NaN, so garbage must be caught here.
    if (!k_y.allFinite())
        throw OptimizationFailureError("covariance matrix has non-finite entries");
    static const double shifts[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
    for (double shift : shifts) {
        Eigen::MatrixXd m = k_y;
        if (shift > 0.0)
            m.diagonal().array() += shift;
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() == Eigen::Success)
            return {Eigen::MatrixXd(llt.matrixL()), shift};
    }
    throw OptimizationFailureError(
        "covariance factorization failed even with jitter 1e-6");
}

struct LmlWorkspace {
    Eigen::MatrixXd k;       // kernel matrix, no noise
    Eigen::MatrixXd dk_ls;   // d k / d log(length_scale)
    Eigen::MatrixXd k_y;     // k + noise on the diagonal
};

void build_kernel_matrices(const Eigen::MatrixXd& inputs, const GpHyperparams& hp,
                           LmlWorkspace& ws) {
    const Eigen::Index n = inputs.rows();
    Matern52Kernel kernel{hp.signal_variance, hp.length_scale};
    ws.k.resize(n, n);
    ws.dk_ls.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ws.k(i, i) = hp.signal_variance;
        ws.dk_ls(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double r = (inputs.row(i) - inputs.row(j)).norm();
            double v = kernel(r);
            double dv = kernel.d_log_length_scale(r);
            ws.k(i, j) = v;
            ws.k(j, i) = v;
            ws.dk_ls(i, j) = dv;
            ws.dk_ls(j, i) = dv;
        }
    }
    ws.k_y = ws.k;
    ws.k_y.diagonal().array() += hp.noise_variance;
}

}  // namespace

LmlResult gp_lml(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                 const GpHyperparams& hp) {
    const Eigen::Index n = inputs.rows();
    if (targets.size() != n)
        throw ShapeError("gp targets length " + format_int(targets.size()) +
                         " does not match " + format_int(n) + " inputs");
    if (n == 0)
        throw ShapeError("gp requires at least one training point");

    LmlWorkspace ws;
    build_kernel_matrices(inputs, hp, ws);
    Factorization fac = factor_with_jitter(ws.k_y);

    auto lower = fac.lower.triangularView<Eigen::Lower>();
    Eigen::VectorXd alpha = lower.solve(targets);
    lower.transpose().solveInPlace(alpha);

    LmlResult out;
    out.jitter_used = fac.jitter;
    out.value = -0.5 * targets.dot(alpha) -
                fac.lower.diagonal().array().log().sum() -
                0.5 * static_cast<double>(n) * kLog2Pi;

    // 0.5 a' dK a - 0.5 tr(K_y^-1 dK) for each log parameter.
    Eigen::MatrixXd k_inv = Eigen::MatrixXd::Identity(n, n);
    lower.solveInPlace(k_inv);
    lower.transpose().solveInPlace(k_inv);

    out.gradient[0] = 0.5 * alpha.dot(ws.k * alpha) -
                      0.5 * k_inv.cwiseProduct(ws.k).sum();
    out.gradient[1] = 0.5 * alpha.dot(ws.dk_ls * alpha) -
                      0.5 * k_inv.cwiseProduct(ws.dk_ls).sum();
    out.gradient[2] = 0.5 * hp.noise_variance * alpha.squaredNorm() -
                      0.5 * hp.noise_variance * k_inv.trace();
    return out;
}

namespace {

struct ObjectiveEval {
    double f = std::numeric_limits<double>::infinity();
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    bool ok = false;
};

ObjectiveEval eval_negative_lml(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& y,
                                const Eigen::Vector3d& log_params) {
    GpHyperparams hp;
    hp.signal_variance = std::exp(log_params[0]);
    hp.length_scale = std::exp(log_params[1]);
    hp.noise_variance = std::exp(log_params[2]);
    ObjectiveEval e;
    try {
        LmlResult r = gp_lml(inputs, y, hp);
        if (!std::isfinite(r.value) || !r.gradient.allFinite())
            return e;
        e.f = -r.value;
        e.g = -r.gradient;
        e.ok = true;
    } catch (const OptimizationFailureError&) {
    }
    return e;
}

struct OptimumCandidate {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double f = std::numeric_limits<double>::infinity();
};

// L-BFGS (memory 8) with Armijo backtracking, minimizing the negative
// log marginal likelihood over the three log parameters.
OptimumCandidate minimize_lbfgs(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& y,
                                Eigen::Vector3d x, const GpFitOptions& opt) {
    constexpr int kMemory = 8;
    constexpr double kArmijoC1 = 1e-4;
    constexpr int kMaxBacktracks = 30;

    OptimumCandidate best;
    ObjectiveEval cur = eval_negative_lml(inputs, y, x);
    if (!cur.ok)
        return best;
    best = {x, cur.f};

    std::deque<std::pair<Eigen::Vector3d, Eigen::Vector3d>> history;  // (s, y)

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        if (cur.g.lpNorm<Eigen::Infinity>() <= opt.gradient_tolerance)
            break;

        // Two-loop recursion.
        Eigen::Vector3d q = cur.g;
        std::vector<double> alpha_coef(history.size());
        for (std::size_t h = history.size(); h-- > 0;) {
            const auto& [s, yv] = history[h];
            double rho = 1.0 / yv.dot(s);
            alpha_coef[h] = rho * s.dot(q);
            q -= alpha_coef[h] * yv;
        }
        if (!history.empty()) {
            const auto& [s, yv] = history.back();
            q *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            const auto& [s, yv] = history[h];
            double rho = 1.0 / yv.dot(s);
            double beta = rho * yv.dot(q);
            q += (alpha_coef[h] - beta) * s;
        }
        Eigen::Vector3d dir = -q;
        if (dir.dot(cur.g) >= 0.0) {  // not a descent direction
            history.clear();
            dir = -cur.g;
        }

        double step = history.empty() ? 1.0 / std::max(1.0, cur.g.norm()) : 1.0;
        double slope = dir.dot(cur.g);
        ObjectiveEval next;
        Eigen::Vector3d x_next;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            x_next = x + step * dir;
            next = eval_negative_lml(inputs, y, x_next);
            if (next.ok && next.f <= cur.f + kArmijoC1 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;

        Eigen::Vector3d s = x_next - x;
        Eigen::Vector3d yv = next.g - cur.g;
        if (yv.dot(s) > 1e-12 * s.norm() * yv.norm()) {
            history.emplace_back(s, yv);
            if (static_cast<int>(history.size()) > kMemory)
                history.pop_front();
        }

        x = x_next;
        cur = next;
        if (cur.f < best.f)
            best = {x, cur.f};
    }
    return best;
}

}  // namespace

GpModel GpModel::fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const GpFitOptions& options) {
    if (inputs.rows() != targets.size())
        throw ShapeError("gp fit: " + format_int(inputs.rows()) + " inputs vs " +
                         format_int(targets.size()) + " targets");
    if (inputs.rows() < 1)
        throw ShapeError("gp fit requires at least one sample");
    if (options.restarts < 1)
        throw ConfigError("gp fit needs restarts >= 1");

    GpModel model;
    model.inputs_ = inputs;
    model.targets_ = targets;

    const auto n = static_cast<double>(targets.size());
    double mean = targets.mean();
    double var_pop = (targets.array() - mean).matrix().squaredNorm() / n;
    double stddev = std::sqrt(var_pop);

    if (stddev == 0.0) {
        // Constant target: no information for the kernel. Predict the
        // constant with the floor variance instead of failing.
        model.degenerate_ = true;
        model.st_ = {mean, 1.0};
        model.hp_ = {1.0, 1.0, options.noise_floor};
        model.lml_ = 0.0;
        return model;
    }

    model.st_ = {mean, stddev};
    Eigen::VectorXd y = (targets.array() - mean).matrix() / stddev;

    Eigen::Vector3d x_base;
    x_base[0] = 0.0;  // sv = 1 for unit-variance targets
    x_base[1] = std::log(median_pairwise_distance(inputs));
    x_base[2] = std::log(options.initial_noise);

    OptimumCandidate best;
    for (int run = 0; run < options.restarts; ++run) {
        Eigen::Vector3d x0 = x_base;
        if (run > 0) {
            KeyedStream rng{options.seed, kTagGpRestart, static_cast<std::uint64_t>(run)};
            for (int p = 0; p < 3; ++p)
                x0[p] += rng.uniform(-2.0, 2.0);
        }
        OptimumCandidate cand = minimize_lbfgs(model.inputs_, y, x0, options);
        if (cand.f < best.f)
            best = cand;
    }
    if (!std::isfinite(best.f))
        throw OptimizationFailureError("all hyperparameter restarts failed");

    model.hp_.signal_variance = std::exp(best.x[0]);
    model.hp_.length_scale = std::exp(best.x[1]);
    model.hp_.noise_variance = std::max(std::exp(best.x[2]), options.noise_floor);
    model.build_predictor();
    return model;
}

GpModel GpModel::from_state(Eigen::MatrixXd inputs, Eigen::VectorXd targets,
                            const GpHyperparams& hp, const Standardizer& st,
                            bool degenerate) {
    GpModel model;
    model.inputs_ = std::move(inputs);
    model.targets_ = std::move(targets);
    model.hp_ = hp;
    model.st_ = st;
    model.degenerate_ = degenerate;
    if (!degenerate)
        model.build_predictor();
    return model;
}

void GpModel::build_predictor() {
    Eigen::VectorXd y(targets_.size());
    for (Eigen::Index i = 0; i < targets_.size(); ++i)
        y[i] = st_.apply(targets_[i]);

    Matern52Kernel kernel{hp_.signal_variance, hp_.length_scale};
    Eigen::MatrixXd k_y = covariance_matrix(inputs_, kernel, hp_.noise_variance);
    Factorization fac = factor_with_jitter(k_y);
    chol_lower_ = std::move(fac.lower);
    jitter_ = fac.jitter;

    auto lower = chol_lower_.triangularView<Eigen::Lower>();
    alpha_ = lower.solve(y);
    lower.transpose().solveInPlace(alpha_);

    lml_ = -0.5 * y.dot(alpha_) - chol_lower_.diagonal().array().log().sum() -
           0.5 * static_cast<double>(y.size()) * kLog2Pi;
}

std::pair<double, double> GpModel::predict(const Eigen::RowVectorXd& query) const {
    if (degenerate_)
        return {st_.mean, hp_.noise_variance * st_.stddev * st_.stddev};
    if (query.size() != inputs_.cols())
        throw ShapeError("gp query dimension " + format_int(query.size()) +
                         " does not match inputs of dimension " + format_int(inputs_.cols()));

    Matern52Kernel kernel{hp_.signal_variance, hp_.length_scale};
    Eigen::VectorXd k_star = cross_covariance(inputs_, query, kernel);

    double mean_std = k_star.dot(alpha_);
    Eigen::VectorXd w = chol_lower_.triangularView<Eigen::Lower>().solve(k_star);
    double var_std = std::max(0.0, hp_.signal_variance - w.squaredNorm());

    return {st_.invert(mean_std), var_std * st_.stddev * st_.stddev};
}

}  // namespace latentgp
