#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iddm/errors.hpp"
#include "iddm/measurement.hpp"

using namespace iddm;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Werner state density matrix") {
    CHECK_THROWS_AS(WernerState(-0.1), Error);
    CHECK_THROWS_AS(WernerState(1.1), Error);
    for (double z : {0.0, 0.37, 1.0}) {
        const Eigen::Matrix4cd rho = WernerState(z).density_matrix();
        CHECK(std::abs(rho.trace() - 1.0) <= 1e-15);
        CHECK(max_abs(rho - rho.adjoint()) == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
        CHECK(es.eigenvalues().minCoeff() >= -1e-15);
        CHECK(rho(0, 3).real() == doctest::Approx(z / 2));
        CHECK(rho(1, 1).real() == doctest::Approx((1 - z) / 4));
    }
}

TEST_CASE("unmeasured impurity population vanishes") {
    CHECK(unmeasured_population(WernerState(0.0)) == 0.0);
    CHECK(unmeasured_population(WernerState(1.0)) == 0.0);
    CHECK(std::abs(unmeasured_population(WernerState(0.37))) <= 1e-15);
}

TEST_CASE("measurement examples") {
    auto r = measure(WernerState(1.0), {0.0, Outcome::Plus});
    CHECK(r.delta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.probability == doctest::Approx(0.5));

    r = measure(WernerState(0.8), {kPi / 6, Outcome::Plus});
    CHECK(r.delta == doctest::Approx(0.4).epsilon(1e-14));
    r = measure(WernerState(0.8), {kPi / 6, Outcome::Minus});
    CHECK(r.delta == doctest::Approx(-0.4).epsilon(1e-14));

    for (double theta : {0.0, 0.3, 1.2}) {
        r = measure(WernerState(0.0), {theta, Outcome::Minus});
        CHECK(std::abs(r.delta) <= 1e-15);
        CHECK(max_abs(r.density_matrix - 0.5 * Eigen::Matrix2cd::Identity()) <= 1e-15);
    }
}

TEST_CASE("projectors are complete and idempotent") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 100; ++i) {
        const double theta = u(rng);
        const auto plus = ProjectiveMeasurement{theta, Outcome::Plus}.projector();
        const auto minus = ProjectiveMeasurement{theta, Outcome::Minus}.projector();
        CHECK(max_abs(plus + minus - Eigen::Matrix2cd::Identity()) <= 1e-14);
        CHECK(max_abs(plus * plus - plus) <= 1e-14);
        CHECK(max_abs(minus * minus - minus) <= 1e-14);
        CHECK(max_abs(plus * minus) <= 1e-14);
    }
}

TEST_CASE("collapsed state matches the closed form") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = u(rng);
        const double theta = kPi * (u(rng) - 0.5);
        const WernerState state(z);
        const auto plus = measure(state, {theta, Outcome::Plus});
        const auto minus = measure(state, {theta, Outcome::Minus});
        CHECK(std::abs(plus.delta - z * std::cos(2 * theta)) <= 1e-12);
        CHECK(std::abs(minus.delta + z * std::cos(2 * theta)) <= 1e-12);
        CHECK(std::abs(plus.probability * plus.delta + minus.probability * minus.delta -
                       unmeasured_population(state)) <= 1e-12);
        CHECK(plus.probability + minus.probability == doctest::Approx(1.0).epsilon(1e-14));

        for (const auto& [m, r] : {std::pair{Outcome::Plus, plus}, std::pair{Outcome::Minus, minus}}) {
            const Eigen::Vector2cd psi = ProjectiveMeasurement{theta, m}.state();
            const Eigen::Matrix2cd expected =
                0.5 * (1 - z) * Eigen::Matrix2cd::Identity() + z * psi * psi.adjoint();
            CHECK(max_abs(r.density_matrix - expected) <= 1e-12);
            CHECK(std::abs(r.density_matrix.trace() - 1.0) <= 1e-14);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(r.density_matrix);
            CHECK(es.eigenvalues().minCoeff() >= -1e-14);
            CHECK(std::abs(r.delta) <= z + 1e-15);
        }
    }
}

TEST_CASE("target population round trip") {
    auto m = angle_for_target_delta(1.0, 0.5);
    CHECK(m.theta == doctest::Approx(kPi / 6).epsilon(1e-15));
    CHECK(m.sign == Outcome::Plus);

    try {
        angle_for_target_delta(0.4, 0.5);
        FAIL("expected Unreachable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unreachable);
    }

    m = angle_for_target_delta(0.9, 0.0);
    CHECK(m.theta == doctest::Approx(kPi / 4).epsilon(1e-15));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = u(rng);
        const double t = z * (2.0 * u(rng) - 1.0);
        const auto mm = angle_for_target_delta(z, t);
        CHECK(std::abs(measure(WernerState(z), mm).delta - t) <= 1e-12);
    }
    CHECK(measure(WernerState(0.6), angle_for_target_delta(0.6, -0.6)).delta ==
          doctest::Approx(-0.6).epsilon(1e-14));
}
