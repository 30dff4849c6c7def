#include "iddm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "iddm/errors.hpp"

namespace iddm {

namespace {

using Complex = std::complex<double>;

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Tr_B of a 4x4 operator in the 2 a + b ordering.
Eigen::Matrix2cd trace_out_b(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix2cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return out;
}

}  // namespace

WernerState::WernerState(double z) : z_(z) {
    if (!(z >= 0.0 && z <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter,
                    "Werner parameter z must lie in [0, 1], got " + std::to_string(z));
    }
}

Eigen::Matrix4cd WernerState::density_matrix() const {
    Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
    bell[0] = bell[3] = 1.0 / std::numbers::sqrt2;  // |00> and |11>
    return (1.0 - z_) / 4.0 * Eigen::Matrix4cd::Identity() + z_ * bell * bell.adjoint();
}

Eigen::Vector2cd ProjectiveMeasurement::state() const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    // components on (|0>, |1>)
    if (sign == Outcome::Plus) return Eigen::Vector2cd(c, s);
    return Eigen::Vector2cd(-s, c);
}

Eigen::Matrix2cd ProjectiveMeasurement::projector() const {
    const Eigen::Vector2cd psi = state();
    return psi * psi.adjoint();
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

double unmeasured_population(const WernerState& state) {
    const Eigen::Matrix4cd sz_a = kron(pauli_z(), Eigen::Matrix2cd::Identity());
    return (state.density_matrix() * sz_a).trace().real();
}

CollapsedImpurity measure(const WernerState& state, const ProjectiveMeasurement& measurement) {
    const Eigen::Matrix4cd lift = kron(Eigen::Matrix2cd::Identity(), measurement.projector());
    const Eigen::Matrix4cd projected = lift * state.density_matrix() * lift;
    const double probability = projected.trace().real();
    if (probability < 1e-15) {
        throw Error(ErrorKind::ZeroProbabilityOutcome,
                    "measurement outcome has probability " + std::to_string(probability));
    }
    CollapsedImpurity out;
    out.probability = probability;
    out.density_matrix = trace_out_b(projected) / probability;
    out.delta = (out.density_matrix * pauli_z()).trace().real();
    return out;
}

ProjectiveMeasurement angle_for_target_delta(double z, double target) {
    const WernerState state(z);
    if (!(std::abs(target) <= z)) {
        throw Error(ErrorKind::Unreachable, "target population " + std::to_string(target) +
                                                " exceeds the Werner parameter z = " +
                                                std::to_string(z));
    }
    const Outcome sign = target < 0.0 ? Outcome::Minus : Outcome::Plus;
    if (state.z() == 0.0) return ProjectiveMeasurement{std::numbers::pi / 4.0, sign};
    const double ratio = std::min(1.0, std::abs(target) / z);
    return ProjectiveMeasurement{0.5 * std::acos(ratio), sign};
}

}  // namespace iddm
