// ed_oracle.hpp: Finite-N exact diagonalization of the full impurity-doped Dicke model
//
// Basis |n> (photons, 0..cutoff) x |j = N/2, m> (x |s> for the full-qubit mode),
// flattened as index = (n (N + 1) + m + N/2) * q + s with q = 1 or 2. The qubit
// slot s = 0 holds sigma_z = +1 (upper state |0>), s = 1 holds sigma_z = -1.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "iddm/lanczos.hpp"
#include "iddm/model.hpp"

namespace iddm {

enum class ImpurityMode {
    FixedDelta,  // sigma_z replaced by the scalar delta; constant omega_q' delta / 2 dropped
    FullQubit,   // sigma_z kept as an operator, including omega_q'/2 sigma_z
};

struct EDConfig {
    int n_atoms{8};
    int photon_cutoff{1};  // raised automatically to the mean-field informed minimum
    ImpurityMode mode{ImpurityMode::FixedDelta};
    double delta{0.0};     // used in FixedDelta mode
    bool include_chi{false};
    double convergence_factor{2.0};
    double solver_tolerance{1e-9};
    std::size_t max_dimension{1'000'000};
};

/// Smallest photon cutoff admitted for these parameters:
/// ceil(N a2 + 6 sqrt(N a2)) + 10, with a2 the predicted photon fraction.
int minimum_photon_cutoff(const ModelParams& params, const EDConfig& config);

std::size_t hilbert_dimension(const EDConfig& config);

/// Hamiltonian matrix at exactly config.photon_cutoff (no auto-raise). Throws
/// DimensionTooLarge or InvalidParameter.
SparseOperator build_hamiltonian(const ModelParams& params, const EDConfig& config);

/// Diagonal parity exp[i pi (a^dag a + Jz + N/2)] in the same basis.
SparseOperator parity_operator(const EDConfig& config);

struct EDResult {
    int n_atoms{0};
    int photon_cutoff{0};
    std::size_t dimension{0};
    double energy_per_atom{0.0};
    double jz_over_n{0.0};
    double photons_over_n{0.0};
    std::optional<double> parity;  // FixedDelta with xi2 = 0 only
    double residual{0.0};
    double cutoff_shift{0.0};      // |E/N(cutoff) - E/N(cutoff * factor)|
    bool converged{false};
};

/// Ground state at the (auto-raised) cutoff, plus a re-run at cutoff times
/// convergence_factor that sets `converged` when E/N moves by <= 1e-8 relative.
/// Throws ConvergenceFailure if the eigensolver misses solver_tolerance.
EDResult ground_state(const ModelParams& params, const EDConfig& config);

struct FiniteSizeEntry {
    EDResult result;
    double mean_field_energy{0.0};  // E0 - f2/2, the offset-consistent reference
    double deviation{0.0};          // |energy_per_atom - mean_field_energy|
};

std::vector<FiniteSizeEntry> finite_size_scan(const ModelParams& params, double delta,
                                              const std::vector<int>& n_list,
                                              const EDConfig& config_template);

}  // namespace iddm
