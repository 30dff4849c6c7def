// measurement.hpp: Steering the impurity population through a correlated auxiliary atom
//
// Qubit basis ordering is (|0>, |1>) with sigma_z = diag(+1, -1): |0> is the
// upper impurity state that couples to the condensate. Two-qubit index is
// 2 a + b with the impurity A first and the auxiliary atom B second.
//
// Outcome Plus projects B onto sin(theta)|1> + cos(theta)|0>; outcome Minus
// onto its orthogonal complement cos(theta)|1> - sin(theta)|0>, so the two
// projectors resolve the identity. The collapsed population is +/- z cos(2 theta).

#pragma once

#include <Eigen/Dense>

namespace iddm {

class WernerState {
public:
    /// Throws InvalidParameter unless 0 <= z <= 1.
    explicit WernerState(double z);

    double z() const noexcept { return z_; }

    /// (1 - z)/4 I + z |Psi><Psi| with |Psi> = (|00> + |11>)/sqrt(2).
    Eigen::Matrix4cd density_matrix() const;

private:
    double z_;
};

enum class Outcome { Plus, Minus };

struct ProjectiveMeasurement {
    double theta{0.0};  // radians
    Outcome sign{Outcome::Plus};

    Eigen::Vector2cd state() const;
    Eigen::Matrix2cd projector() const;
};

Eigen::Matrix2cd pauli_z();

struct CollapsedImpurity {
    Eigen::Matrix2cd density_matrix;
    double delta{0.0};
    double probability{0.0};
};

/// Tr[rho sigma_z^A] of the unmeasured Werner state, from the full 4x4 matrix.
double unmeasured_population(const WernerState& state);

/// Project B, trace it out and renormalize. Throws ZeroProbabilityOutcome when
/// the outcome probability is below 1e-15.
CollapsedImpurity measure(const WernerState& state, const ProjectiveMeasurement& measurement);

/// Angle and outcome that steer the impurity to `target`. Throws Unreachable
/// when |target| > z.
ProjectiveMeasurement angle_for_target_delta(double z, double target);

}  // namespace iddm
