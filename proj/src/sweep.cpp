#include "iddm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "iddm/errors.hpp"

namespace iddm {

std::vector<double> AxisRange::points() const {
    if (count < 1) throw Error(ErrorKind::InvalidParameter, "grid count must be >= 1");
    if (!(min <= max)) throw Error(ErrorKind::InvalidParameter, "grid needs min <= max");
    if (count == 1) {
        if (min != max) {
            throw Error(ErrorKind::InvalidParameter, "a single-point grid needs min == max");
        }
        return {min};
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double span = max - min;
    for (int i = 0; i < count; ++i) out[i] = min + span * i / (count - 1);
    out.back() = max;
    return out;
}

namespace {

PhaseDiagramRow evaluate(const ModelParams& base, double delta, double lambda) {
    PhaseDiagramRow row;
    row.delta = delta;
    row.lambda = lambda;
    try {
        ModelParams p = base;
        p.lambda = lambda;
        const auto sol = equilibrium_closed_form(p, ImpurityPopulation(delta));
        const auto obs = observables(sol);
        row.alpha2 = sol.alpha * sol.alpha;
        row.beta2 = sol.beta * sol.beta;
        row.e0 = sol.e0;
        row.jz_over_n = obs.jz_over_n;
        row.i_over_n = obs.i_over_n;
        row.phase = std::string(to_string(sol.phase));
    } catch (const Error& e) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        row.alpha2 = row.beta2 = row.e0 = row.jz_over_n = row.i_over_n = nan;
        row.phase = "error";
        row.error = std::string(to_string(e.kind()));
    }
    return row;
}

}  // namespace

std::vector<PhaseDiagramRow> run_grid(const GridSpec& spec, unsigned threads) {
    const auto deltas = spec.delta.points();
    const auto lambdas = spec.lambda.points();
    const std::size_t inner = lambdas.size();
    const std::size_t total = deltas.size() * inner;
    std::vector<PhaseDiagramRow> rows(total);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            rows[i] = evaluate(spec.params, deltas[i / inner], lambdas[i % inner]);
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(total, 1));
    if (workers == 1) {
        work(0, total);
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(work, begin, end);
    }
    pool.clear();  // joins
    return rows;
}

std::vector<CriticalCurvePoint> trace_critical_curve(const ModelParams& params,
                                                     const AxisRange& delta_range) {
    std::vector<CriticalCurvePoint> out;
    for (double d : delta_range.points()) {
        out.push_back({d, critical_lambda(params, ImpurityPopulation(d))});
    }
    return out;
}

std::string format_float(double value) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_csv(std::ostream& out, const std::vector<PhaseDiagramRow>& rows) {
    out << "delta,lambda,alpha2,beta2,e0,jz_over_n,i_over_n,phase,error\n";
    for (const auto& r : rows) {
        out << format_float(r.delta) << ',' << format_float(r.lambda) << ','
            << format_float(r.alpha2) << ',' << format_float(r.beta2) << ','
            << format_float(r.e0) << ',' << format_float(r.jz_over_n) << ','
            << format_float(r.i_over_n) << ',' << r.phase << ',' << r.error << '\n';
    }
}

void write_json_lines(std::ostream& out, const std::vector<PhaseDiagramRow>& rows) {
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["delta"] = r.delta;
        j["lambda"] = r.lambda;
        j["alpha2"] = r.alpha2;
        j["beta2"] = r.beta2;
        j["e0"] = r.e0;
        j["jz_over_n"] = r.jz_over_n;
        j["i_over_n"] = r.i_over_n;
        j["phase"] = r.phase;
        j["error"] = r.error;
        out << j.dump() << '\n';
    }
}

void write_csv(std::ostream& out, const DerivativeScan& scan) {
    out << "param,value,e0,d1,d2\n";
    const auto name = to_string(scan.parameter);
    for (std::size_t i = 0; i < scan.d2_values.size(); ++i) {
        out << name << ',' << format_float(scan.grid[i + 1]) << ','
            << format_float(scan.e0_values[i + 1]) << ',' << format_float(scan.d1_values[i])
            << ',' << format_float(scan.d2_values[i]) << '\n';
    }
}

void write_json_lines(std::ostream& out, const DerivativeScan& scan) {
    const auto name = std::string(to_string(scan.parameter));
    for (std::size_t i = 0; i < scan.d2_values.size(); ++i) {
        nlohmann::ordered_json j;
        j["param"] = name;
        j["value"] = scan.grid[i + 1];
        j["e0"] = scan.e0_values[i + 1];
        j["d1"] = scan.d1_values[i];
        j["d2"] = scan.d2_values[i];
        out << j.dump() << '\n';
    }
}

}  // namespace iddm
