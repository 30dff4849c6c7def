// fluctuations.hpp: Collective excitation energies around the mean-field state
//
// The classical energy is written in four quadratures q = (x1, p1, x2, p2) with
// alpha = (x1 + i p1)/sqrt(2), beta = (x2 + i p2)/sqrt(2):
//
//   E_cl(q) = f1 |alpha|^2 + f2 |beta|^2 - 4 lambda K Re(alpha) Re(beta),  K = sqrt(1 - |beta|^2).
//
// Quadratic fluctuations are H2 = q^T M q / 2 with M the Hessian of E_cl at the
// equilibrium; the excitation energies are the symplectic eigenvalues of M.

#pragma once

#include <Eigen/Dense>

#include "iddm/meanfield.hpp"
#include "iddm/model.hpp"

namespace iddm {

struct SpectrumResult {
    double eps_minus{0.0};
    double eps_plus{0.0};
    bool stable{true};
};

using Quadratures = Eigen::Vector4d;
using QuadraticForm = Eigen::Matrix4d;

/// Canonical symplectic form for the (x1, p1, x2, p2) ordering.
QuadraticForm symplectic_form();

double classical_energy(const ModelParams& params, ImpurityPopulation delta, const Quadratures& q);

/// Analytic Hessian of classical_energy. Requires |beta|^2 < 1.
QuadraticForm energy_hessian(const ModelParams& params, ImpurityPopulation delta,
                             const Quadratures& q);

/// Symplectic eigenvalues of a symmetric form, i.e. the positive imaginary parts
/// of the eigenvalues of J M. A form with a negative direction beyond
/// `tolerance` (relative to its largest eigenvalue) is reported unstable and its
/// energies are left at zero.
SpectrumResult symplectic_spectrum(const QuadraticForm& hessian, double tolerance = 1e-10);

/// Excitation energies at the closed-form equilibrium. Throws UnstableEquilibrium
/// if the Hessian there is not positive semidefinite.
SpectrumResult excitation_spectrum(const ModelParams& params, ImpurityPopulation delta);

}  // namespace iddm
