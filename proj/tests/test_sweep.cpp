#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "iddm/errors.hpp"
#include "iddm/sweep.hpp"

using namespace iddm;

namespace {

GridSpec figure_grid() {
    GridSpec spec;
    spec.params = benchmark_params();
    return spec;
}

}  // namespace

TEST_CASE("axis ranges") {
    const auto pts = AxisRange{-1.0, 1.0, 201}.points();
    REQUIRE(pts.size() == 201);
    CHECK(pts.front() == -1.0);
    CHECK(pts.back() == 1.0);
    CHECK(pts[100] == 0.0);
    CHECK(AxisRange{0.5, 0.5, 1}.points().size() == 1);
    CHECK_THROWS_AS(AxisRange({0.0, 1.0, 1}).points(), Error);
    CHECK_THROWS_AS(AxisRange({1.0, 0.0, 3}).points(), Error);
    CHECK_THROWS_AS(AxisRange({0.0, 1.0, 0}).points(), Error);
}

TEST_CASE("phase labels follow the sign of the critical curve") {
    const auto rows = run_grid(figure_grid(), 4);
    REQUIRE(rows.size() == 201u * 121u);
    int checked = 0;
    for (const auto& r : rows) {
        REQUIRE(r.error.empty());
        const double s = r.lambda * r.lambda + 50.0 * r.delta - 50.0;
        if (std::abs(s) < 1e-9) continue;
        ++checked;
        CHECK(r.phase == (s < 0 ? "normal" : "superradiant"));
    }
    CHECK(checked > 24000);
}

TEST_CASE("row order is delta outer, lambda inner") {
    GridSpec spec = figure_grid();
    spec.delta = {0.0, 1.0, 3};
    spec.lambda = {1.0, 3.0, 2};
    const auto rows = run_grid(spec);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].delta == 0.0);
    CHECK(rows[0].lambda == 1.0);
    CHECK(rows[1].lambda == 3.0);
    CHECK(rows[2].delta == 0.5);
    CHECK(rows[5].delta == 1.0);
}

TEST_CASE("single normal-phase point") {
    GridSpec spec = figure_grid();
    spec.delta = {0.0, 0.0, 1};
    spec.lambda = {5.0, 5.0, 1};
    const auto rows = run_grid(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].phase == "normal");
    CHECK(rows[0].jz_over_n == -0.5);
    CHECK(rows[0].i_over_n == 0.0);
}

TEST_CASE("unbounded points become error rows") {
    GridSpec spec = figure_grid();
    spec.params.kappa = -2.0;
    spec.delta = {-1.0, 1.0, 21};
    spec.lambda = {1.0, 12.0, 12};
    const auto rows = run_grid(spec);
    int errors = 0;
    for (const auto& r : rows) {
        const auto f = effective_frequencies([&] {
            auto p = spec.params;
            p.lambda = r.lambda;
            return p;
        }(), ImpurityPopulation(r.delta));
        const bool unbounded = *f.nu <= -1.0;
        if (unbounded) {
            ++errors;
            CHECK(r.phase == "error");
            CHECK(r.error == "unbounded_phase");
            CHECK(std::isnan(r.e0));
        } else {
            CHECK(r.error.empty());
            CHECK(std::isfinite(r.e0));
        }
    }
    CHECK(errors > 0);
}

TEST_CASE("phase-region consistency") {
    const auto rows = run_grid(figure_grid(), 2);
    for (const auto& r : rows) {
        if (r.phase == "superradiant") {
            CHECK(r.i_over_n > 0.0);
            CHECK(r.jz_over_n > -0.5);
        } else if (r.phase == "normal") {
            CHECK(r.jz_over_n == -0.5);
            CHECK(r.i_over_n == 0.0);
        }
    }
    // at fixed delta the photon fraction grows with lambda
    const std::size_t inner = 121;
    for (std::size_t d = 0; d < 201; ++d) {
        for (std::size_t l = 1; l < inner; ++l) {
            const auto& a = rows[d * inner + l - 1];
            const auto& b = rows[d * inner + l];
            if (a.phase == "superradiant") CHECK(b.i_over_n > a.i_over_n);
        }
    }
}

TEST_CASE("critical curve") {
    const auto p = benchmark_params();
    const auto curve = trace_critical_curve(p, {-1.0, 1.0, 201});
    REQUIRE(curve.size() == 201);
    for (const auto& pt : curve) {
        if (pt.lambda_c) CHECK(std::abs(*pt.lambda_c * *pt.lambda_c + 50 * pt.delta - 50) <= 1e-9);
    }
    CHECK(curve[100].lambda_c.value() == doctest::Approx(7.0710678118654755).epsilon(1e-15));
    CHECK_FALSE(curve.back().lambda_c.has_value());
    CHECK(curve.front().lambda_c.value() == doctest::Approx(10.0).epsilon(1e-15));

    auto flat = p;
    flat.kappa = 0.0;
    for (const auto& pt : trace_critical_curve(flat, {-1.0, 1.0, 11})) {
        CHECK(pt.lambda_c.value() == 10.0);
    }
}

TEST_CASE("critical curve and phase diagram agree") {
    const GridSpec spec = figure_grid();
    const auto rows = run_grid(spec);
    const auto curve = trace_critical_curve(spec.params, spec.delta);
    const auto lambdas = spec.lambda.points();
    for (std::size_t d = 0; d < curve.size(); ++d) {
        for (std::size_t l = 1; l < lambdas.size(); ++l) {
            const auto& a = rows[d * lambdas.size() + l - 1];
            const auto& b = rows[d * lambdas.size() + l];
            if (a.phase == "critical" || b.phase == "critical") continue;
            const bool changes = a.phase != b.phase;
            // no transition on this row means the curve endpoint lambda_c = 0
            const double lc = curve[d].lambda_c.value_or(0.0);
            const bool between = lc >= lambdas[l - 1] && lc < lambdas[l];
            CHECK(changes == between);
        }
    }
}

TEST_CASE("csv output is byte reproducible across thread counts") {
    GridSpec spec = figure_grid();
    spec.delta = {-1.0, 1.0, 41};
    spec.lambda = {0.0, 12.0, 25};
    std::ostringstream a, b, c;
    write_csv(a, run_grid(spec, 1));
    write_csv(b, run_grid(spec, 1));
    write_csv(c, run_grid(spec, 7));
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
    CHECK(a.str().rfind("delta,lambda,alpha2,beta2,e0,jz_over_n,i_over_n,phase,error\n", 0) == 0);
}

TEST_CASE("csv row format") {
    GridSpec spec = figure_grid();
    spec.delta = {1.0, 1.0, 1};
    spec.lambda = {5.0, 5.0, 1};
    std::ostringstream out;
    write_csv(out, run_grid(spec));
    std::istringstream in(out.str());
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(header == "delta,lambda,alpha2,beta2,e0,jz_over_n,i_over_n,phase,error");
    CHECK(out.str().back() == '\n');
    std::vector<std::string> cells;
    std::istringstream cs(row);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    if (row.back() == ',') cells.emplace_back();
    REQUIRE(cells.size() == 9);
    CHECK(cells[0] == "1");
    CHECK(cells[1] == "5");
    CHECK(std::stod(cells[2]) == doctest::Approx(1.5625e-4).epsilon(1e-14));
    CHECK(std::stod(cells[3]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cells[4] == "-0.0625");
    CHECK(cells[7] == "superradiant");
    CHECK(cells[8].empty());
    CHECK(format_float(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_float(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("derivative scan serialization") {
    const auto scan = derivative_scan(benchmark_params(), ScanParameter::Delta, 0.0, 1.0, 0.25);
    std::ostringstream csv;
    write_csv(csv, scan);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,value,e0,d1,d2");
    int count = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("delta,", 0) == 0);
        ++count;
    }
    CHECK(count == 3);
    std::ostringstream jl;
    write_json_lines(jl, scan);
    CHECK(jl.str().rfind("{\"param\":\"delta\",\"value\":0.25,", 0) == 0);
}
