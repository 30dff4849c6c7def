// meanfield.hpp: Thermodynamic-limit ground state of the impurity-doped Dicke model
//
// Displacing the photon and Holstein-Primakoff modes by sqrt(N) alpha and
// sqrt(N) beta gives the scaled energy landscape
//
//   E0(alpha, beta) = f1 alpha^2 + f2 beta^2 - 4 lambda K alpha beta,  K = sqrt(1 - beta^2).
//
// Solutions are canonicalized to alpha, beta >= 0 (the (-alpha, -beta) copy is
// the other parity-broken ground state). The xi2 drive carries no sqrt(N) and
// does not enter E0.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "iddm/model.hpp"

namespace iddm {

enum class Phase { Normal, Superradiant, Critical };

std::string_view to_string(Phase phase);

/// |nu - 1| at or below this labels a point Critical.
inline constexpr double kCriticalTolerance = 1e-12;

struct MeanFieldSolution {
    double alpha{0.0};
    double beta{0.0};
    double e0{0.0};
    std::optional<double> nu;
    Phase phase{Phase::Normal};
};

double scaled_energy(const ModelParams& params, ImpurityPopulation delta, double alpha,
                     double beta);

struct EnergyGradient {
    double d_alpha;
    double d_beta;
};

/// Analytic gradient of scaled_energy. Requires |beta| < 1.
EnergyGradient energy_gradient(const ModelParams& params, ImpurityPopulation delta,
                               double alpha, double beta);

MeanFieldSolution equilibrium_closed_form(const ModelParams& params, ImpurityPopulation delta);

struct NumericOptions {
    int seed_count{8};
    int max_iterations{400};
    double gradient_tolerance{1e-10};
    double beta_guard{1e-9};
};

/// Global minimum of scaled_energy by multi-start damped Newton descent. The
/// search runs in the angle beta = sin(phi), which keeps |beta| <= 1 without
/// constraints. Throws ConvergenceFailure if no start reaches the gradient
/// tolerance.
MeanFieldSolution equilibrium_numeric(const ModelParams& params, ImpurityPopulation delta,
                                      const NumericOptions& options = {});

/// Impurity population at which nu(delta) = 1, or nullopt when the crossing lies
/// outside [-1, 1]. With xi1 = 0 this is (4 lambda^2 - omega omega0)/(omega kappa) - 1.
std::optional<double> critical_delta(const ModelParams& params);

/// Coupling at which 4 lambda^2 = f1 f2, or nullopt when f1 f2 <= 0 (superradiant
/// for every lambda > 0).
std::optional<double> critical_lambda(const ModelParams& params, ImpurityPopulation delta);

struct Observables {
    double jz_over_n;
    double i_over_n;
};

Observables observables(const MeanFieldSolution& solution);

enum class ScanParameter { Delta, Lambda };

std::string_view to_string(ScanParameter parameter);

struct DerivativeScan {
    ScanParameter parameter{ScanParameter::Delta};
    double step{0.0};
    std::vector<double> grid;
    std::vector<double> e0_values;
    // Central differences at grid[1 .. n-2]; two shorter than grid.
    std::vector<double> d1_values;
    std::vector<double> d2_values;
    // Largest |d2[i+1] - d2[i]| and the midpoint of the two grid points it spans.
    double max_d2_jump{0.0};
    double jump_location{0.0};
    double max_d1_jump{0.0};
};

/// E0 on a uniform grid from `from` to `to` (inclusive, within rounding) with
/// first and second central differences. For a Delta scan the coupling comes
/// from params; for a Lambda scan the impurity population is `fixed_delta`.
DerivativeScan derivative_scan(const ModelParams& params, ScanParameter parameter, double from,
                               double to, double step, double fixed_delta = 0.0);

}  // namespace iddm
