#include "latentgp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {
namespace {

// Absolute fallback scale for the convergence test; keeps the zero-load
// case well defined (it converges on the first residual check).
constexpr double kResidualFloor = 1e-8;

void check_settings(const SolveSettings& s) {
    if (s.load_increments < 1)
        throw ConfigError("load_increments must be >= 1");
    if (!(s.tolerance > 0.0))
        throw ConfigError("solver tolerance must be positive");
    if (s.max_newton_iterations < 1)
        throw ConfigError("max_newton_iterations must be >= 1");
    if (s.max_step_halvings < 0)
        throw ConfigError("max_step_halvings must be >= 0");
}

}  // namespace

Eigen::VectorXd solve_static(const Mesh2D& mesh, const MaterialParams& mat,
                             const LoadSpec& load, const SolveSettings& settings,
                             SolveReport* report) {
    check_settings(settings);
    mesh.validate();

    SolveReport local;
    SolveReport& rep = report ? *report : local;
    rep = SolveReport{};

    const int n = mesh.n_dofs();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

    const double base_step = 1.0 / settings.load_increments;
    double step = base_step;
    double load_factor = 0.0;
    int halvings_used = 0;
    int clean_streak = 0;
    std::optional<InvertedElementError> last_inversion;

    while (load_factor < 1.0 - 1e-12) {
        const double target = std::min(1.0, load_factor + step);

        Eigen::VectorXd u_try = u;
        bool converged = false;
        bool inverted = false;

        for (int it = 0; it < settings.max_newton_iterations; ++it) {
            AssemblyResult sys;
            try {
                sys = assemble(mesh, mat, u_try, load, target);
            } catch (const InvertedElementError& e) {
                last_inversion = e;
                inverted = true;
                break;
            }
            ++rep.newton_iterations;

            const double r_norm = sys.residual.norm();
            if (!std::isfinite(r_norm))
                break;
            if (r_norm <= settings.tolerance * std::max(sys.external_norm, kResidualFloor)) {
                rep.final_residual = r_norm;
                converged = true;
                break;
            }

            Eigen::VectorXd du = sys.tangent.partialPivLu().solve(-sys.residual);
            u_try += du;
        }

        if (converged) {
            u = u_try;
            load_factor = target;
            ++rep.increments;
            ++clean_streak;
            if (settings.allow_step_growth && clean_streak >= 2 && step < base_step) {
                step = std::min(base_step, 2.0 * step);
                clean_streak = 0;
            }
            continue;
        }

        ++halvings_used;
        ++rep.step_halvings;
        clean_streak = 0;
        if (halvings_used > settings.max_step_halvings) {
            if (inverted && last_inversion) {
                last_inversion->add_context("step control exhausted at load factor " +
                                            format_double(load_factor));
                throw *last_inversion;
            }
            throw NonConvergenceError(
                "Newton did not converge; last accepted load factor " +
                    format_double(load_factor),
                load_factor);
        }
        step *= 0.5;
    }

    return u;
}

}  // namespace latentgp
