#include "iddm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "iddm/ed_oracle.hpp"
#include "iddm/errors.hpp"
#include "iddm/fluctuations.hpp"
#include "iddm/meanfield.hpp"
#include "iddm/measurement.hpp"
#include "iddm/model.hpp"
#include "iddm/sweep.hpp"

namespace iddm::cli {

namespace {

using json = nlohmann::ordered_json;

struct Settings {
    ModelParams model = benchmark_params();
    double delta{0.0};
    std::string config_path;
    std::string output;
    std::string format;

    // meanfield
    std::string method{"closed"};
    int seeds{8};

    // sweep
    AxisRange delta_axis{-1.0, 1.0, 201};
    AxisRange lambda_axis{0.0, 12.0, 121};
    bool critical_curve{false};

    // deriv
    std::string wrt{"delta"};
    double from{0.0};
    double to{1.0};
    double step{1e-3};

    // ed
    std::vector<int> n_list{8, 16, 32};
    int cutoff{1};
    std::string mode{"fixed"};
    bool include_chi{false};
    double convergence_factor{2.0};
    double tolerance{1e-9};
    std::size_t max_dimension{1'000'000};

    // measure
    double z{1.0};
    double theta{0.0};
    std::string sign{"plus"};
    double target{0.0};
    std::uint64_t seed{0};
};

std::string short_number(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

void add_model_options(CLI::App* sub, Settings& s) {
    sub->add_option("--omega", s.model.omega, "Effective cavity frequency (units of omega0)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--omega0", s.model.omega0, "Effective atomic transition frequency")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--lambda", s.model.lambda, "Collective atom-field coupling")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--kappa", s.model.kappa, "Impurity-condensate coupling")->capture_default_str();
    sub->add_option("--chi", s.model.chi, "Atomic nonlinearity (mean field needs 0)")
        ->capture_default_str();
    sub->add_option("--xi1", s.model.xi1, "Dispersive impurity-cavity shift")->capture_default_str();
    sub->add_option("--xi2", s.model.xi2, "Impurity-driven field displacement")->capture_default_str();
    sub->add_option("--omega-q-prime", s.model.omega_q_prime, "Shifted impurity splitting")
        ->capture_default_str();
}

void add_common(CLI::App* sub, Settings& s) {
    sub->add_option("--config", s.config_path, "JSON object of flag values; flags override it");
}

CLI::Option* add_delta(CLI::App* sub, Settings& s) {
    return sub->add_option("--delta", s.delta, "Impurity population <sigma_z>")
        ->check(CLI::Range(-1.0, 1.0))
        ->capture_default_str();
}

void add_output(CLI::App* sub, Settings& s, const std::string& default_format,
                const std::vector<std::string>& formats) {
    s.format = default_format;
    sub->add_option("-o,--output", s.output, "Output file (default stdout)");
    sub->add_option("--format", s.format, "Output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
}

std::string_view hint(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonPositiveF1: return " (check --omega, --xi1, --delta)";
        case ErrorKind::ChiUnsupported: return " (check --chi)";
        case ErrorKind::UnboundedPhase: return " (check --kappa, --delta, --lambda)";
        case ErrorKind::ZeroKappa: return " (check --kappa)";
        case ErrorKind::DimensionTooLarge: return " (check --n, --cutoff, --max-dim)";
        case ErrorKind::Unreachable: return " (check --target, --z)";
        case ErrorKind::ZeroProbabilityOutcome: return " (check --z, --theta, --sign)";
        default: return "";
    }
}

int report(const Error& e, std::ostream& err) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << hint(e.kind()) << '\n';
    return e.kind() == ErrorKind::ConvergenceFailure ? kExitConvergence : kExitInvalid;
}

// Writes to --output when given, otherwise to `out`.
int emit(const Settings& s, std::ostream& out, std::ostream& err,
         const std::function<void(std::ostream&)>& body) {
    if (s.output.empty()) {
        body(out);
        return kExitOk;
    }
    std::ofstream file(s.output, std::ios::binary);
    if (!file) {
        err << "error: cannot open --output " << s.output << '\n';
        return kExitInvalid;
    }
    body(file);
    return file ? kExitOk : kExitInvalid;
}

bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

std::optional<std::string> config_path_of(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

std::string json_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_float(v.get<double>());
    throw std::invalid_argument("unsupported config value " + v.dump());
}

// Inserts config-file values ahead of the command-line flags for every key the
// command line does not set. Keys name flags without the leading dashes;
// underscores and dashes are interchangeable.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App* sub,
                                       const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read --config " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("--config " + path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw std::invalid_argument("--config must hold a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        const std::string flag = "--" + name;
        if (name == "config" || sub->get_option_no_throw(flag) == nullptr) {
            throw std::invalid_argument("--config: unknown key '" + key + "' for " +
                                        sub->get_name());
        }
        if (flag_present(args, flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back(flag);
            continue;
        }
        injected.push_back(flag);
        if (value.is_array()) {
            for (const auto& item : value) injected.push_back(json_scalar(item));
        } else {
            injected.push_back(json_scalar(value));
        }
    }
    std::vector<std::string> out{args.front()};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

unsigned thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("IDDM_THREADS");
    if (env == nullptr || *env == '\0') return hw;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw std::invalid_argument("IDDM_THREADS must be a positive integer");
    return std::min<unsigned>(hw, static_cast<unsigned>(v));
}

int cmd_critical(const Settings& s, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    const bool has_lambda = sub.get_option("--lambda")->count() > 0;
    const bool has_delta = sub.get_option("--delta")->count() > 0;
    if (has_lambda == has_delta) {
        err << "error: critical needs exactly one of --lambda (solve for delta_c) or --delta "
               "(solve for lambda_c)\n";
        return kExitInvalid;
    }
    if (has_lambda) {
        const auto d = critical_delta(s.model);
        out << (d ? "delta_c = " + short_number(*d) : std::string("no-transition")) << '\n';
    } else {
        const auto l = critical_lambda(s.model, ImpurityPopulation(s.delta));
        out << (l ? "lambda_c = " + short_number(*l) : std::string("no-transition")) << '\n';
    }
    return kExitOk;
}

int cmd_meanfield(const Settings& s, std::ostream& out, std::ostream& err) {
    const ImpurityPopulation delta(s.delta);
    const MeanFieldSolution sol = s.method == "numeric"
                                      ? equilibrium_numeric(s.model, delta, {.seed_count = s.seeds})
                                      : equilibrium_closed_form(s.model, delta);
    const auto obs = observables(sol);
    return emit(s, out, err, [&](std::ostream& o) {
        if (s.format == "json-lines") {
            json j;
            j["delta"] = s.delta;
            j["lambda"] = s.model.lambda;
            j["phase"] = to_string(sol.phase);
            j["nu"] = sol.nu ? json(*sol.nu) : json(nullptr);
            j["alpha"] = sol.alpha;
            j["beta"] = sol.beta;
            j["e0"] = sol.e0;
            j["jz_over_n"] = obs.jz_over_n;
            j["i_over_n"] = obs.i_over_n;
            o << j.dump() << '\n';
            return;
        }
        o << "phase = " << to_string(sol.phase) << '\n'
          << "nu = " << (sol.nu ? short_number(*sol.nu) : std::string("undefined")) << '\n'
          << "alpha = " << short_number(sol.alpha) << '\n'
          << "beta = " << short_number(sol.beta) << '\n'
          << "e0 = " << short_number(sol.e0) << '\n'
          << "jz_over_n = " << short_number(obs.jz_over_n) << '\n'
          << "i_over_n = " << short_number(obs.i_over_n) << '\n';
    });
}

int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    if (s.critical_curve) {
        const auto curve = trace_critical_curve(s.model, s.delta_axis);
        return emit(s, out, err, [&](std::ostream& o) {
            o << "delta,lambda_c\n";
            for (const auto& p : curve) {
                o << format_float(p.delta) << ','
                  << (p.lambda_c ? format_float(*p.lambda_c) : std::string("no-transition"))
                  << '\n';
            }
        });
    }
    GridSpec spec{s.delta_axis, s.lambda_axis, s.model};
    const auto rows = run_grid(spec, thread_budget());
    return emit(s, out, err, [&](std::ostream& o) {
        if (s.format == "json-lines") {
            write_json_lines(o, rows);
        } else {
            write_csv(o, rows);
        }
    });
}

int cmd_deriv(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto param = s.wrt == "lambda" ? ScanParameter::Lambda : ScanParameter::Delta;
    const auto scan = derivative_scan(s.model, param, s.from, s.to, s.step, s.delta);
    return emit(s, out, err, [&](std::ostream& o) {
        if (s.format == "json-lines") {
            write_json_lines(o, scan);
        } else {
            write_csv(o, scan);
        }
    });
}

int cmd_spectrum(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto spec = excitation_spectrum(s.model, ImpurityPopulation(s.delta));
    return emit(s, out, err, [&](std::ostream& o) {
        o << "eps_minus = " << short_number(spec.eps_minus) << '\n'
          << "eps_plus = " << short_number(spec.eps_plus) << '\n'
          << "stable = " << (spec.stable ? "true" : "false") << '\n';
    });
}

int cmd_ed(const Settings& s, std::ostream& out, std::ostream& err) {
    EDConfig base;
    base.photon_cutoff = s.cutoff;
    base.mode = s.mode == "qubit" ? ImpurityMode::FullQubit : ImpurityMode::FixedDelta;
    base.delta = s.delta;
    base.include_chi = s.include_chi;
    base.convergence_factor = s.convergence_factor;
    base.solver_tolerance = s.tolerance;
    base.max_dimension = s.max_dimension;

    // Offset-consistent mean-field reference E0 - f2/2, when one exists.
    std::optional<double> reference;
    if (base.mode == ImpurityMode::FixedDelta) {
        try {
            ModelParams mf = s.model;
            if (!s.include_chi) mf.chi = 0.0;
            const ImpurityPopulation d(s.delta);
            reference = equilibrium_closed_form(mf, d).e0 - 0.5 * effective_frequencies(mf, d).f2;
        } catch (const Error&) {
        }
    }

    std::vector<json> records;
    for (int n : s.n_list) {
        EDConfig config = base;
        config.n_atoms = n;
        const EDResult r = ground_state(s.model, config);
        json j;
        j["n_atoms"] = r.n_atoms;
        j["photon_cutoff"] = r.photon_cutoff;
        j["dimension"] = r.dimension;
        j["energy_per_atom"] = r.energy_per_atom;
        j["jz_over_n"] = r.jz_over_n;
        j["photons_over_n"] = r.photons_over_n;
        j["parity"] = r.parity ? json(*r.parity) : json(nullptr);
        j["converged"] = r.converged;
        j["cutoff_shift"] = r.cutoff_shift;
        j["residual"] = r.residual;
        j["mean_field_energy"] = reference ? json(*reference) : json(nullptr);
        j["deviation"] =
            reference ? json(std::abs(r.energy_per_atom - *reference)) : json(nullptr);
        records.push_back(std::move(j));
    }
    return emit(s, out, err, [&](std::ostream& o) {
        for (const auto& j : records) o << j.dump() << '\n';
    });
}

int cmd_measure(const Settings& s, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    const WernerState state(s.z);
    ProjectiveMeasurement m{s.theta, s.sign == "minus" ? Outcome::Minus : Outcome::Plus};
    if (sub.get_option("--target")->count() > 0) {
        if (sub.get_option("--theta")->count() > 0 || sub.get_option("--sign")->count() > 0) {
            err << "error: --target chooses the angle and sign; drop --theta/--sign\n";
            return kExitInvalid;
        }
        m = angle_for_target_delta(s.z, s.target);
    } else if (s.sign == "random") {
        // Born sampling of the outcome; the seed makes the draw reproducible.
        const double p_plus = measure(state, {s.theta, Outcome::Plus}).probability;
        std::mt19937_64 rng(s.seed);
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        m.sign = u < p_plus ? Outcome::Plus : Outcome::Minus;
    }
    const CollapsedImpurity c = measure(state, m);
    return emit(s, out, err, [&](std::ostream& o) {
        o << "delta = " << short_number(c.delta) << '\n'
          << "theta = " << short_number(m.theta) << '\n'
          << "sign = " << (m.sign == Outcome::Plus ? "plus" : "minus") << '\n'
          << "probability = " << short_number(c.probability) << '\n';
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const auto v = c.density_matrix(i, j);
                o << "rho_" << i << j << " = " << short_number(v.real()) << ' '
                  << (v.imag() < 0 ? '-' : '+') << ' ' << short_number(std::abs(v.imag())) << "i\n";
            }
        }
    });
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Impurity-doped Dicke model toolkit", "iddm"};
    app.require_subcommand(1);

    auto* critical = app.add_subcommand("critical", "Critical delta_c (given --lambda) or lambda_c (given --delta)");
    add_model_options(critical, s);
    add_delta(critical, s);
    add_common(critical, s);

    auto* meanfield = app.add_subcommand("meanfield", "Mean-field equilibrium at one point");
    add_model_options(meanfield, s);
    add_delta(meanfield, s);
    meanfield->add_option("--method", s.method, "closed (formula) or numeric (multi-start descent)")
        ->check(CLI::IsMember({"closed", "numeric"}))
        ->capture_default_str();
    meanfield->add_option("--seeds", s.seeds, "Descent starts for --method numeric")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output(meanfield, s, "text", {"text", "json-lines"});
    add_common(meanfield, s);

    auto* sweep = app.add_subcommand("sweep", "Phase diagram over a (delta, lambda) grid");
    add_model_options(sweep, s);
    sweep->add_option("--delta-min", s.delta_axis.min)->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    sweep->add_option("--delta-max", s.delta_axis.max)->check(CLI::Range(-1.0, 1.0))->capture_default_str();
    sweep->add_option("--delta-count", s.delta_axis.count)->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--lambda-min", s.lambda_axis.min)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep->add_option("--lambda-max", s.lambda_axis.max)->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep->add_option("--lambda-count", s.lambda_axis.count)->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_flag("--critical-curve", s.critical_curve, "Emit delta,lambda_c along the delta axis instead");
    add_output(sweep, s, "csv", {"csv", "json-lines"});
    add_common(sweep, s);

    auto* deriv = app.add_subcommand("deriv", "E0 and its finite-difference derivatives along delta or lambda");
    add_model_options(deriv, s);
    add_delta(deriv, s)->description("Fixed impurity population for --wrt lambda");
    deriv->add_option("--wrt", s.wrt)->check(CLI::IsMember({"delta", "lambda"}))->capture_default_str();
    deriv->add_option("--from", s.from)->capture_default_str();
    deriv->add_option("--to", s.to)->capture_default_str();
    deriv->add_option("--step", s.step)->check(CLI::PositiveNumber)->capture_default_str();
    add_output(deriv, s, "csv", {"csv", "json-lines"});
    add_common(deriv, s);

    auto* spectrum = app.add_subcommand("spectrum", "Collective excitation energies at the equilibrium");
    add_model_options(spectrum, s);
    add_delta(spectrum, s);
    spectrum->add_option("-o,--output", s.output, "Output file (default stdout)");
    add_common(spectrum, s);

    auto* ed = app.add_subcommand("ed", "Finite-N exact diagonalization, one json-lines record per N");
    add_model_options(ed, s);
    add_delta(ed, s);
    ed->add_option("--n", s.n_list, "Atom numbers, e.g. --n 8 16 32 or --n 8,16,32")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ed->add_option("--cutoff", s.cutoff, "Photon cutoff (raised to the mean-field minimum)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ed->add_option("--mode", s.mode, "fixed: sigma_z -> delta; qubit: full impurity qubit")
        ->check(CLI::IsMember({"fixed", "qubit"}))
        ->capture_default_str();
    ed->add_flag("--include-chi", s.include_chi, "Keep the chi Jz^2 / N term");
    ed->add_option("--convergence-factor", s.convergence_factor)->check(CLI::Range(1.0 + 1e-12, 1e6))->capture_default_str();
    ed->add_option("--tolerance", s.tolerance, "Eigensolver residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    ed->add_option("--max-dim", s.max_dimension, "Hilbert space dimension cap")->capture_default_str();
    ed->add_option("-o,--output", s.output, "Output file (default stdout)");
    add_common(ed, s);

    auto* meas = app.add_subcommand("measure", "Steer the impurity population by measuring the auxiliary atom");
    meas->add_option("--z", s.z, "Werner mixing parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    meas->add_option("--theta", s.theta, "Measurement angle in radians")->capture_default_str();
    meas->add_option("--sign", s.sign, "Outcome: plus, minus or random (Born sampling)")
        ->check(CLI::IsMember({"plus", "minus", "random"}))
        ->capture_default_str();
    meas->add_option("--seed", s.seed, "Seed for --sign random")->capture_default_str();
    meas->add_option("--target", s.target, "Target population; chooses theta and sign");
    meas->add_option("-o,--output", s.output, "Output file (default stdout)");
    add_common(meas, s);

    try {
        if (!args.empty()) {
            if (auto path = config_path_of(args)) {
                CLI::App* sub = nullptr;
                for (auto* candidate : app.get_subcommands([](CLI::App*) { return true; })) {
                    if (candidate->check_name(args.front())) sub = candidate;
                }
                if (sub != nullptr) args = expand_config(args, sub, *path);
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (*critical) return cmd_critical(s, *critical, out, err);
        if (*meanfield) return cmd_meanfield(s, out, err);
        if (*sweep) return cmd_sweep(s, out, err);
        if (*deriv) return cmd_deriv(s, out, err);
        if (*spectrum) return cmd_spectrum(s, out, err);
        if (*ed) return cmd_ed(s, out, err);
        if (*meas) return cmd_measure(s, *meas, out, err);
    } catch (const Error& e) {
        return report(e, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}

}  // namespace iddm::cli
