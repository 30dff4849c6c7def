#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iddm/meanfield.hpp"
#include "iddm/model.hpp"

namespace iddm {

struct AxisRange {
    double min{0.0};
    double max{0.0};
    int count{2};

    /// Evenly spaced points including both ends; count == 1 requires min == max.
    std::vector<double> points() const;
};

struct GridSpec {
    AxisRange delta{-1.0, 1.0, 201};
    AxisRange lambda{0.0, 12.0, 121};
    ModelParams params;  // lambda is overridden by the grid
};

struct PhaseDiagramRow {
    double delta{0.0};
    double lambda{0.0};
    double alpha2{0.0};
    double beta2{0.0};
    double e0{0.0};
    double jz_over_n{0.0};
    double i_over_n{0.0};
    std::string phase;  // normal | superradiant | critical | error
    std::string error;  // empty when ok
};

/// Row-major over (delta outer, lambda inner). Failing points become error rows;
/// the run never aborts. Up to `threads` workers evaluate points; output order
/// does not depend on it.
std::vector<PhaseDiagramRow> run_grid(const GridSpec& spec, unsigned threads = 1);

struct CriticalCurvePoint {
    double delta;
    std::optional<double> lambda_c;
};

std::vector<CriticalCurvePoint> trace_critical_curve(const ModelParams& params,
                                                     const AxisRange& delta_range);

/// %.17g, the round-trip representation used by every file format.
std::string format_float(double value);

void write_csv(std::ostream& out, const std::vector<PhaseDiagramRow>& rows);
void write_json_lines(std::ostream& out, const std::vector<PhaseDiagramRow>& rows);

/// Interior points only, header `param,value,e0,d1,d2`.
void write_csv(std::ostream& out, const DerivativeScan& scan);
void write_json_lines(std::ostream& out, const DerivativeScan& scan);

}  // namespace iddm
