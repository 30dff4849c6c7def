#include "iddm/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "iddm/errors.hpp"

namespace iddm {

namespace {

void require_no_chi(const ModelParams& params) {
    if (params.chi != 0.0) {
        throw Error(ErrorKind::ChiUnsupported,
                    "mean-field analysis requires chi = 0, got " + std::to_string(params.chi));
    }
}

// E0 as a function of (alpha, phi) with beta = sin(phi), K = cos(phi):
//   E = f1 a^2 + f2 sin^2(phi) - 2 lambda a sin(2 phi).
// Unconstrained and smooth; stationary points with cos(phi) != 0 map onto
// stationary points of the (alpha, beta) landscape.
struct AngleLandscape {
    double f1;
    double f2;
    double lambda;

    double energy(double a, double phi) const {
        const double s = std::sin(phi);
        return f1 * a * a + f2 * s * s - 2.0 * lambda * a * std::sin(2.0 * phi);
    }

    std::array<double, 2> gradient(double a, double phi) const {
        return {2.0 * f1 * a - 2.0 * lambda * std::sin(2.0 * phi),
                f2 * std::sin(2.0 * phi) - 4.0 * lambda * a * std::cos(2.0 * phi)};
    }

    // (aa, ap, pp)
    std::array<double, 3> hessian(double a, double phi) const {
        return {2.0 * f1, -4.0 * lambda * std::cos(2.0 * phi),
                2.0 * f2 * std::cos(2.0 * phi) + 8.0 * lambda * a * std::sin(2.0 * phi)};
    }
};

struct Candidate {
    double alpha;
    double phi;
};

// Damped Newton with an eigenvalue shift whenever the Hessian is not positive
// definite, so every step is a descent direction.
Candidate descend(const AngleLandscape& land, Candidate x, int max_iterations) {
    const double scale = land.f1 + std::abs(land.f2) + land.lambda;
    for (int it = 0; it < max_iterations; ++it) {
        const auto g = land.gradient(x.alpha, x.phi);
        const double gnorm = std::hypot(g[0], g[1]);
        if (gnorm == 0.0) break;

        auto [haa, hap, hpp] = land.hessian(x.alpha, x.phi);
        const double mean = 0.5 * (haa + hpp);
        const double radius = std::hypot(0.5 * (haa - hpp), hap);
        const double min_eig = mean - radius;
        const double floor = 1e-10 * scale;
        const bool convex = min_eig >= floor;
        if (!convex) {
            const double shift = floor - min_eig;
            haa += shift;
            hpp += shift;
        }
        const double det = haa * hpp - hap * hap;
        const double da = -(hpp * g[0] - hap * g[1]) / det;
        const double dp = -(-hap * g[0] + haa * g[1]) / det;

        // Near a minimum energy differences drown in rounding; a pure Newton
        // step that halves the gradient is taken as is.
        if (convex) {
            const auto g_full = land.gradient(x.alpha + da, x.phi + dp);
            if (std::hypot(g_full[0], g_full[1]) <= 0.5 * gnorm) {
                x.alpha += da;
                x.phi += dp;
                continue;
            }
        }

        const double e_now = land.energy(x.alpha, x.phi);
        const double slope = g[0] * da + g[1] * dp;
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            const double e_try = land.energy(x.alpha + t * da, x.phi + t * dp);
            if (e_try <= e_now + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Energy differences are below rounding; fall back to the full step
            // if it still shrinks the gradient.
            const auto g_try = land.gradient(x.alpha + da, x.phi + dp);
            if (std::hypot(g_try[0], g_try[1]) >= gnorm) break;
            t = 1.0;
        }
        x.alpha += t * da;
        x.phi += t * dp;
        if (std::hypot(t * da, t * dp) <= 1e-300) break;
    }
    return x;
}

Phase classify(const std::optional<double>& nu) {
    if (nu && std::abs(*nu - 1.0) <= kCriticalTolerance) return Phase::Critical;
    return Phase::Normal;
}

// Shared precondition for both equilibrium routes: returns f1, f2, nu and
// rejects points whose minimum leaves the |beta| < 1 domain.
EffectiveFrequencies admissible_frequencies(const ModelParams& params, ImpurityPopulation delta) {
    require_no_chi(params);
    const auto f = effective_frequencies(params, delta);
    const bool unbounded = f.nu ? *f.nu <= -1.0 : f.f2 < 0.0;
    if (unbounded) {
        throw Error(ErrorKind::UnboundedPhase,
                    "nu <= -1: the matter displacement would exceed |beta| = 1 at delta = " +
                        std::to_string(delta.value()));
    }
    return f;
}

}  // namespace

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::Normal: return "normal";
        case Phase::Superradiant: return "superradiant";
        case Phase::Critical: return "critical";
    }
    return "unknown";
}

std::string_view to_string(ScanParameter parameter) {
    return parameter == ScanParameter::Delta ? "delta" : "lambda";
}

double scaled_energy(const ModelParams& params, ImpurityPopulation delta, double alpha,
                     double beta) {
    require_no_chi(params);
    if (!(std::abs(beta) <= 1.0)) {
        throw Error(ErrorKind::DomainError, "|beta| must be <= 1, got " + std::to_string(beta));
    }
    const auto f = effective_frequencies(params, delta);
    const double k = std::sqrt(1.0 - beta * beta);
    return f.f1 * alpha * alpha + f.f2 * beta * beta - 4.0 * params.lambda * k * alpha * beta;
}

EnergyGradient energy_gradient(const ModelParams& params, ImpurityPopulation delta, double alpha,
                               double beta) {
    require_no_chi(params);
    if (!(std::abs(beta) < 1.0)) {
        throw Error(ErrorKind::DomainError, "|beta| must be < 1, got " + std::to_string(beta));
    }
    const auto f = effective_frequencies(params, delta);
    const double lam = params.lambda;
    const double k = std::sqrt(1.0 - beta * beta);
    return EnergyGradient{2.0 * (f.f1 * alpha - 2.0 * lam * k * beta),
                          2.0 * (f.f2 * beta - 2.0 * lam * alpha * (k - beta * beta / k))};
}

MeanFieldSolution equilibrium_closed_form(const ModelParams& params, ImpurityPopulation delta) {
    const auto f = admissible_frequencies(params, delta);
    MeanFieldSolution sol;
    sol.nu = f.nu;
    // lambda == 0 with f2 >= 0, or nu >= 1: no collective excitation.
    if (!f.nu || *f.nu >= 1.0 || classify(f.nu) == Phase::Critical) {
        sol.phase = classify(f.nu);
        return sol;
    }
    const double nu = *f.nu;
    const double lam = params.lambda;
    sol.phase = Phase::Superradiant;
    sol.alpha = lam / f.f1 * std::sqrt(1.0 - nu * nu);
    sol.beta = std::sqrt(0.5 * (1.0 - nu));
    sol.e0 = -(lam * lam / f.f1) * (1.0 - nu) * (1.0 - nu);
    return sol;
}

MeanFieldSolution equilibrium_numeric(const ModelParams& params, ImpurityPopulation delta,
                                      const NumericOptions& options) {
    const auto f = admissible_frequencies(params, delta);
    if (options.seed_count < 1) {
        throw Error(ErrorKind::InvalidParameter, "seed_count must be >= 1");
    }
    const AngleLandscape land{f.f1, f.f2, params.lambda};

    // The origin is stationary for every parameter set and is the reference candidate.
    MeanFieldSolution best;
    best.nu = f.nu;
    double best_energy = 0.0;
    bool any_converged = false;

    const int n = options.seed_count;
    for (int k = 0; k < n; ++k) {
        const double phi0 = -std::numbers::pi / 2.0 + std::numbers::pi * (k + 0.5) / n;
        const double alpha0 = params.lambda * std::sin(2.0 * phi0) / f.f1;
        const Candidate x = descend(land, {alpha0, phi0}, options.max_iterations);

        const double c = std::cos(x.phi);
        double beta = std::sin(x.phi);
        double alpha = std::copysign(1.0, c) * x.alpha;
        if (!std::isfinite(alpha) || std::abs(beta) > 1.0 - options.beta_guard) continue;

        const auto g = energy_gradient(params, delta, alpha, beta);
        if (std::hypot(g.d_alpha, g.d_beta) > options.gradient_tolerance) continue;
        any_converged = true;

        if (beta < 0.0) {
            alpha = -alpha;
            beta = -beta;
        }
        if (beta == 0.0) alpha = std::abs(alpha);
        const double e = scaled_energy(params, delta, alpha, beta);
        if (e < best_energy) {
            best_energy = e;
            best.alpha = alpha;
            best.beta = beta;
            best.e0 = e;
        }
    }
    if (!any_converged) {
        throw Error(ErrorKind::ConvergenceFailure,
                    "no descent start reached gradient norm <= " +
                        std::to_string(options.gradient_tolerance));
    }
    best.phase = best.beta > 0.0 ? Phase::Superradiant : Phase::Normal;
    if (classify(f.nu) == Phase::Critical) best.phase = Phase::Critical;
    return best;
}

std::optional<double> critical_delta(const ModelParams& params) {
    params.validate();
    const double w = params.omega;
    const double w0 = params.omega0;
    const double kap = params.kappa;
    const double x1 = params.xi1;
    const double lam2 = params.lambda * params.lambda;

    auto in_range = [&](double d) -> std::optional<double> {
        constexpr double slop = 1e-12;
        if (!std::isfinite(d) || d < -1.0 - slop || d > 1.0 + slop) return std::nullopt;
        if (w + x1 * d <= 0.0) return std::nullopt;
        return std::clamp(d, -1.0, 1.0);
    };

    if (x1 == 0.0) {
        if (kap == 0.0) {
            throw Error(ErrorKind::ZeroKappa,
                        "kappa = 0: the impurity population does not drive a transition");
        }
        return in_range((4.0 * lam2 - w * w0) / (w * kap) - 1.0);
    }

    // (w + x1 d)(w0 + kap + kap d) = 4 lambda^2
    const double a = x1 * kap;
    const double b = w * kap + x1 * (w0 + kap);
    const double c = w * (w0 + kap) - 4.0 * lam2;
    if (a == 0.0) return in_range(-c / b);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::array<double, 2> roots{q / a, c / q};
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (auto d = in_range(r)) return d;
    }
    return std::nullopt;
}

std::optional<double> critical_lambda(const ModelParams& params, ImpurityPopulation delta) {
    const auto f = effective_frequencies(params, delta);
    const double d = delta.value();
    const double radicand =
        params.xi1 == 0.0 ? params.omega * params.omega0 + params.omega * params.kappa * (1.0 + d)
                          : f.f1 * f.f2;
    if (radicand <= 0.0) return std::nullopt;
    return 0.5 * std::sqrt(radicand);
}

Observables observables(const MeanFieldSolution& solution) {
    return Observables{solution.beta * solution.beta - 0.5, solution.alpha * solution.alpha};
}

DerivativeScan derivative_scan(const ModelParams& params, ScanParameter parameter, double from,
                               double to, double step, double fixed_delta) {
    if (!(step > 0.0) || !(to > from)) {
        throw Error(ErrorKind::InvalidParameter, "derivative scan needs step > 0 and to > from");
    }
    const double span = (to - from) / step;
    const auto count = static_cast<long long>(std::llround(span)) + 1;
    if (count < 3) {
        throw Error(ErrorKind::InvalidParameter, "derivative scan needs at least 3 grid points");
    }

    DerivativeScan scan;
    scan.parameter = parameter;
    scan.step = step;
    scan.grid.reserve(count);
    scan.e0_values.reserve(count);
    for (long long i = 0; i < count; ++i) {
        const double x = from + static_cast<double>(i) * step;
        ModelParams p = params;
        double d = fixed_delta;
        if (parameter == ScanParameter::Delta) {
            d = x;
        } else {
            p.lambda = x;
        }
        try {
            scan.e0_values.push_back(equilibrium_closed_form(p, ImpurityPopulation(d)).e0);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (at " +
                                      std::string(to_string(parameter)) + " = " +
                                      std::to_string(x) + ")");
        }
        scan.grid.push_back(x);
    }

    const auto& e = scan.e0_values;
    for (long long i = 1; i + 1 < count; ++i) {
        scan.d1_values.push_back((e[i + 1] - e[i - 1]) / (2.0 * step));
        scan.d2_values.push_back((e[i + 1] - 2.0 * e[i] + e[i - 1]) / (step * step));
    }
    for (std::size_t i = 0; i + 1 < scan.d2_values.size(); ++i) {
        const double jump = std::abs(scan.d2_values[i + 1] - scan.d2_values[i]);
        if (jump > scan.max_d2_jump) {
            scan.max_d2_jump = jump;
            // d2_values[i] sits at grid[i + 1]
            scan.jump_location = 0.5 * (scan.grid[i + 1] + scan.grid[i + 2]);
        }
        scan.max_d1_jump =
            std::max(scan.max_d1_jump, std::abs(scan.d1_values[i + 1] - scan.d1_values[i]));
    }
    return scan;
}

}  // namespace iddm
