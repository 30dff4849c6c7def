#include "iddm/model.hpp"

#include <cmath>
#include <string>

#include "iddm/errors.hpp"

namespace iddm {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::InvalidParameter, message);
}

}  // namespace

void ModelParams::validate() const {
    const double fields[] = {omega, omega0, lambda, kappa, chi, xi1, xi2, omega_q_prime};
    for (double v : fields) require(std::isfinite(v), "model parameters must be finite");
    require(omega > 0.0, "omega must be > 0");
    require(omega0 > 0.0, "omega0 must be > 0");
    require(lambda >= 0.0, "lambda must be >= 0");
    require(n_atoms >= 1, "n_atoms must be >= 1");
}

ModelParams benchmark_params() {
    ModelParams p;
    p.omega = 400.0;
    p.omega0 = 1.0;
    p.kappa = -0.5;
    p.lambda = 5.0;
    return p;
}

ImpurityPopulation::ImpurityPopulation(double delta) : delta_(delta) {
    if (!(delta >= -1.0 && delta <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter,
                    "impurity population delta must lie in [-1, 1], got " + std::to_string(delta));
    }
}

EffectiveFrequencies effective_frequencies(const ModelParams& params, ImpurityPopulation delta) {
    params.validate();
    const double d = delta.value();
    EffectiveFrequencies out{params.omega + params.xi1 * d,
                             params.omega0 + params.kappa * (1.0 + d), std::nullopt};
    if (out.f1 <= 0.0) {
        throw Error(ErrorKind::NonPositiveF1, "f1 = omega + xi1 delta must be > 0, got " +
                                                  std::to_string(out.f1));
    }
    if (params.lambda > 0.0) out.nu = out.f1 * out.f2 / (4.0 * params.lambda * params.lambda);
    return out;
}

CavityCoefficients derive_cavity_params(const CavityMicroParams& micro, int n_atoms) {
    require(n_atoms >= 1, "n_atoms must be >= 1");
    require(micro.delta_a != 0.0, "atom-pump detuning delta_a must be nonzero");
    const double n = n_atoms;
    return CavityCoefficients{
        -micro.delta_c + n * micro.u0 / 2.0,
        2.0 * micro.omega_r + (n - 1.0) * (micro.s1 - micro.s0) / 2.0,
        std::sqrt(n) * micro.g0 * micro.omega_p_rabi / (2.0 * micro.delta_a),
        n * ((micro.s0 + micro.s1) / 2.0 - micro.s01),
    };
}

ImpurityCouplings derive_impurity_couplings(const ImpurityMicroParams& micro) {
    if (micro.delta_q == 0.0) {
        throw Error(ErrorKind::ZeroDetuning, "impurity detuning Delta_Q must be nonzero");
    }
    return ImpurityCouplings{micro.g_q * micro.g_q / micro.delta_q,
                             micro.g_q * micro.omega_q_rabi / micro.delta_q};
}

}  // namespace iddm
