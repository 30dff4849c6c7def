// model.hpp: Parameters of the impurity-doped Dicke Hamiltonian
//
//   H = (omega + xi1 sz) a^dag a + [omega0 + kappa (sz + 1)] Jz + (chi/N) Jz^2
//     + (omega_q'/2) sz + (lambda/sqrt N)(a + a^dag)(J+ + J-) + xi2 sz (a + a^dag)
//
// All frequencies are in units of the atomic transition frequency omega0.

#pragma once

#include <optional>

namespace iddm {

struct ModelParams {
    double omega{1.0};          // effective cavity frequency
    double omega0{1.0};         // effective atomic transition frequency
    double lambda{0.0};         // collective atom-field coupling, >= 0
    double kappa{0.0};          // impurity-condensate coupling (any sign)
    double chi{0.0};            // atomic nonlinearity; mean-field code requires 0
    double xi1{0.0};            // dispersive impurity-cavity shift
    double xi2{0.0};            // impurity-driven field displacement
    double omega_q_prime{0.0};  // shifted impurity splitting (constant offset only)
    int n_atoms{1};

    /// Throws Error(InvalidParameter) naming the first violated field.
    void validate() const;
};

/// omega = 400, omega0 = 1, kappa = -1/2, lambda = 5: the reference point whose
/// impurity-driven transition sits at delta_c = 1/2.
ModelParams benchmark_params();

/// Impurity population delta = <sigma_z>, guaranteed to lie in [-1, 1].
class ImpurityPopulation {
public:
    explicit ImpurityPopulation(double delta);
    double value() const noexcept { return delta_; }

private:
    double delta_;
};

struct EffectiveFrequencies {
    double f1;
    double f2;
    std::optional<double> nu;  // f1 f2 / (4 lambda^2); empty when lambda == 0
};

/// f1 = omega + xi1 delta, f2 = omega0 + kappa (1 + delta).
/// Throws NonPositiveF1 when f1 <= 0.
EffectiveFrequencies effective_frequencies(const ModelParams& params, ImpurityPopulation delta);

struct CavityMicroParams {
    double delta_c{0.0};       // pump-cavity detuning
    double u0{0.0};            // light shift per atom, g0^2 / delta_a
    double omega_r{0.5};       // recoil frequency
    double s0{0.0};
    double s1{0.0};
    double s01{0.0};
    double g0{0.0};            // single-atom cavity coupling
    double omega_p_rabi{0.0};  // maximum pump Rabi frequency
    double delta_a{1.0};       // atom-pump detuning, nonzero
};

struct CavityCoefficients {
    double omega;
    double omega0;
    double lambda;
    double chi;
};

CavityCoefficients derive_cavity_params(const CavityMicroParams& micro, int n_atoms);

struct ImpurityMicroParams {
    double g_q{0.0};
    double omega_q_rabi{0.0};
    double delta_q{1.0};  // omega_Q - omega_p, nonzero
};

struct ImpurityCouplings {
    double xi1;
    double xi2;
};

/// xi1 = g_Q^2 / Delta_Q, xi2 = g_Q Omega_Q / Delta_Q. Throws ZeroDetuning.
ImpurityCouplings derive_impurity_couplings(const ImpurityMicroParams& micro);

}  // namespace iddm
