#include "iddm/ed_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "iddm/errors.hpp"
#include "iddm/meanfield.hpp"

namespace iddm {

namespace {

struct BasisLayout {
    int n_atoms;
    int cutoff;
    int qubit_states;  // 1 or 2

    std::size_t size() const {
        return static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(n_atoms + 1) *
               static_cast<std::size_t>(qubit_states);
    }
    Eigen::Index index(int n, int k, int s) const {
        return (static_cast<Eigen::Index>(n) * (n_atoms + 1) + k) * qubit_states + s;
    }
};

BasisLayout layout_of(const EDConfig& config) {
    return {config.n_atoms, config.photon_cutoff,
            config.mode == ImpurityMode::FullQubit ? 2 : 1};
}

void validate(const EDConfig& config) {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidParameter, m); };
    if (config.n_atoms < 1) fail("n_atoms must be >= 1");
    if (config.photon_cutoff < 1) fail("photon_cutoff must be >= 1");
    if (!(config.convergence_factor > 1.0)) fail("convergence_factor must be > 1");
    if (!(config.solver_tolerance > 0.0)) fail("solver_tolerance must be > 0");
    if (config.mode == ImpurityMode::FixedDelta) (void)ImpurityPopulation(config.delta);
}

// sigma_z eigenvalue stored in qubit slot s.
double sigma_z_of(const EDConfig& config, int s) {
    if (config.mode == ImpurityMode::FixedDelta) return config.delta;
    return s == 0 ? 1.0 : -1.0;
}

// Predicted photon number N alpha^2 plus the O(1) xi2 displacement.
double predicted_photons(const ModelParams& params, int n_atoms, double delta) {
    ModelParams p = params;
    p.chi = 0.0;
    const auto f = effective_frequencies(p, ImpurityPopulation(delta));
    double a2 = params.lambda * params.lambda / (f.f1 * f.f1);
    try {
        a2 = equilibrium_closed_form(p, ImpurityPopulation(delta)).alpha;
        a2 *= a2;
    } catch (const Error&) {
        // outside the mean-field domain; keep the lambda^2 / f1^2 bound
    }
    const double shift = params.xi2 * delta / f.f1;
    return n_atoms * a2 + shift * shift;
}

}  // namespace

int minimum_photon_cutoff(const ModelParams& params, const EDConfig& config) {
    double photons = 0.0;
    if (config.mode == ImpurityMode::FixedDelta) {
        photons = predicted_photons(params, config.n_atoms, config.delta);
    } else {
        photons = std::max(predicted_photons(params, config.n_atoms, 1.0),
                           predicted_photons(params, config.n_atoms, -1.0));
    }
    return static_cast<int>(std::ceil(photons + 6.0 * std::sqrt(photons))) + 10;
}

std::size_t hilbert_dimension(const EDConfig& config) { return layout_of(config).size(); }

SparseOperator build_hamiltonian(const ModelParams& params, const EDConfig& config) {
    params.validate();
    validate(config);
    const BasisLayout basis = layout_of(config);
    if (basis.size() > config.max_dimension) {
        throw Error(ErrorKind::DimensionTooLarge,
                    "Hilbert space dimension " + std::to_string(basis.size()) +
                        " exceeds the cap " + std::to_string(config.max_dimension));
    }

    const int n_atoms = config.n_atoms;
    const double j = 0.5 * n_atoms;
    const double coupling = params.lambda / std::sqrt(static_cast<double>(n_atoms));
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(basis.size() * 7);

    auto add_pair = [&](Eigen::Index a, Eigen::Index b, double value) {
        if (value == 0.0) return;
        entries.emplace_back(a, b, value);
        entries.emplace_back(b, a, value);
    };

    for (int s = 0; s < basis.qubit_states; ++s) {
        const double sz = sigma_z_of(config, s);
        const double f1 = params.omega + params.xi1 * sz;
        const double f2 = params.omega0 + params.kappa * (sz + 1.0);
        const double drive = params.xi2 * sz;
        const double offset =
            config.mode == ImpurityMode::FullQubit ? 0.5 * params.omega_q_prime * sz : 0.0;

        for (int n = 0; n <= basis.cutoff; ++n) {
            for (int k = 0; k <= n_atoms; ++k) {
                const double m = k - j;
                const Eigen::Index here = basis.index(n, k, s);
                double diag = f1 * n + f2 * m + offset;
                if (config.include_chi) diag += params.chi * m * m / n_atoms;
                entries.emplace_back(here, here, diag);

                if (n == basis.cutoff) continue;
                const double up = std::sqrt(static_cast<double>(n + 1));
                add_pair(here, basis.index(n + 1, k, s), drive * up);
                if (k < n_atoms) {
                    add_pair(here, basis.index(n + 1, k + 1, s),
                             coupling * up * std::sqrt((j - m) * (j + m + 1.0)));
                }
                if (k > 0) {
                    add_pair(here, basis.index(n + 1, k - 1, s),
                             coupling * up * std::sqrt((j + m) * (j - m + 1.0)));
                }
            }
        }
    }

    const auto dim = static_cast<Eigen::Index>(basis.size());
    SparseOperator h(dim, dim);
    h.setFromTriplets(entries.begin(), entries.end());
    return h;
}

SparseOperator parity_operator(const EDConfig& config) {
    validate(config);
    const BasisLayout basis = layout_of(config);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(basis.size());
    for (int n = 0; n <= basis.cutoff; ++n) {
        for (int k = 0; k <= config.n_atoms; ++k) {
            for (int s = 0; s < basis.qubit_states; ++s) {
                // a^dag a + Jz + N/2 = n + k
                entries.emplace_back(basis.index(n, k, s), basis.index(n, k, s),
                                     (n + k) % 2 == 0 ? 1.0 : -1.0);
            }
        }
    }
    SparseOperator p(dim, dim);
    p.setFromTriplets(entries.begin(), entries.end());
    return p;
}

namespace {

struct SolvedState {
    double energy_per_atom;
    double jz_over_n;
    double photons_over_n;
    double parity;
    double residual;
};

SolvedState solve_at(const ModelParams& params, const EDConfig& config) {
    const SparseOperator h = build_hamiltonian(params, config);
    const EigenPair pair = lowest_eigenpair(h, LanczosOptions{120, 200, config.solver_tolerance});
    if (!pair.converged) {
        throw Error(ErrorKind::ConvergenceFailure,
                    "Lanczos residual " + std::to_string(pair.residual) + " above tolerance " +
                        std::to_string(config.solver_tolerance) + " at N = " +
                        std::to_string(config.n_atoms));
    }

    const BasisLayout basis = layout_of(config);
    const double n_atoms = config.n_atoms;
    double photons = 0.0;
    double jz = 0.0;
    double parity = 0.0;
    for (int n = 0; n <= basis.cutoff; ++n) {
        for (int k = 0; k <= config.n_atoms; ++k) {
            for (int s = 0; s < basis.qubit_states; ++s) {
                const double w = pair.vector[basis.index(n, k, s)];
                const double p = w * w;
                photons += p * n;
                jz += p * (k - 0.5 * n_atoms);
                parity += (n + k) % 2 == 0 ? p : -p;
            }
        }
    }
    return {pair.value / n_atoms, jz / n_atoms, photons / n_atoms, parity, pair.residual};
}

}  // namespace

EDResult ground_state(const ModelParams& params, const EDConfig& config) {
    params.validate();
    validate(config);
    EDConfig base = config;
    base.photon_cutoff = std::max(config.photon_cutoff, minimum_photon_cutoff(params, config));
    EDConfig refined = base;
    refined.photon_cutoff =
        static_cast<int>(std::ceil(base.photon_cutoff * config.convergence_factor));

    const SolvedState coarse = solve_at(params, base);
    const SolvedState fine = solve_at(params, refined);

    EDResult out;
    out.n_atoms = base.n_atoms;
    out.photon_cutoff = base.photon_cutoff;
    out.dimension = hilbert_dimension(base);
    out.energy_per_atom = coarse.energy_per_atom;
    out.jz_over_n = coarse.jz_over_n;
    out.photons_over_n = coarse.photons_over_n;
    if (config.mode == ImpurityMode::FixedDelta && params.xi2 == 0.0) out.parity = coarse.parity;
    out.residual = coarse.residual;
    out.cutoff_shift = std::abs(coarse.energy_per_atom - fine.energy_per_atom);
    out.converged = out.cutoff_shift <= 1e-8 * std::max(1.0, std::abs(fine.energy_per_atom));
    return out;
}

std::vector<FiniteSizeEntry> finite_size_scan(const ModelParams& params, double delta,
                                              const std::vector<int>& n_list,
                                              const EDConfig& config_template) {
    ModelParams mf_params = params;
    if (!config_template.include_chi) mf_params.chi = 0.0;
    const ImpurityPopulation d(delta);
    const auto f = effective_frequencies(mf_params, d);
    const double reference = equilibrium_closed_form(mf_params, d).e0 - 0.5 * f.f2;

    std::vector<FiniteSizeEntry> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        EDConfig config = config_template;
        config.n_atoms = n;
        config.mode = ImpurityMode::FixedDelta;
        config.delta = delta;
        FiniteSizeEntry entry;
        entry.result = ground_state(params, config);
        entry.mean_field_energy = reference;
        entry.deviation = std::abs(entry.result.energy_per_atom - reference);
        out.push_back(entry);
    }
    return out;
}

}  // namespace iddm
