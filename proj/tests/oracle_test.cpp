#include "doctest.h"

#include <cmath>
#include <future>
#include <vector>

#include "dkp/dkp_yukawa.hpp"
#include "dkp/errors.hpp"
#include "dkp/oracle.hpp"
#include "test_support.hpp"

using namespace dkp;
using namespace dkp::oracle;
using dkp::test::reference_params;

namespace {

std::vector<double> interior_grid(double eps)
{
    return geometric_grid(0.01 / eps, 10.0 / eps, 400);
}

RadialEvaluator evaluator(RadialFunction const& F)
{
    return [F](double r) { return F(r); };
}

} // namespace

TEST_CASE("rhs")
{
    auto const np = reference_params();

    NaturalParams free = np;
    free.g = 0.0;
    for (unsigned J : {0u, 2u}) {
        for (double r : {0.01, 0.3, 4.0}) {
            double const E = 500.0;
            double const expected = J * (J + 1.0) / (r * r) + np.m * np.m - E * E;
            CHECK(rhs(Variant::exact, free, J, E, r) == doctest::Approx(expected).epsilon(1e-14));
        }
    }

    // The surrogate is the exact coefficient with 1/r -> a/sinh(ar).
    for (unsigned J : {0u, 1u, 3u}) {
        double const E = 870.0;
        for (int i = 0; i < 10; ++i) {
            double const r = 0.003 * std::pow(2.3, i);
            double const u = np.a / std::sinh(np.a * r);
            double const expected = J * (J + 1.0) * u * u - np.g * np.g * std::exp(-2.0 * np.a * r) * u * u -
                                    2.0 * E * np.g * std::exp(-np.a * r) * u + np.m * np.m - E * E;
            double const W = rhs(Variant::approx, np, J, E, r);
            CHECK(std::abs(W - expected) <= 1e-12 * std::max(std::abs(expected), np.m * np.m - E * E));
        }
    }

    // At r = 5/eps the attraction is 2Eg eps/5 against eps^2, so eps^2 only
    // dominates once eps >> 2mg/5; take a weak coupling for the tail check.
    NaturalParams weak = np;
    weak.g = 0.01;
    double const E = 937.0;
    double const eps = std::sqrt(np.m * np.m - E * E);
    double const tail = rhs(Variant::approx, weak, 0, E, 5.0 / eps);
    CHECK(tail > 0.0);
    CHECK(tail == doctest::Approx(eps * eps).epsilon(0.1));

    CHECK_THROWS_AS(rhs(Variant::exact, np, 0, E, 0.0), DomainError);
    CHECK_THROWS_AS(rhs(Variant::approx, np, 0, E, -1.0), DomainError);
}

TEST_CASE("shoot")
{
    auto const np = reference_params();
    double const E0 = energy_physical(np, {0, 0}).energy;
    double const E1 = energy_physical(np, {1, 0}).energy;

    SUBCASE("mismatch changes sign across an eigenvalue")
    {
        double const d = 1e-6 * np.m;
        auto const below = shoot(np, 0, E0 - d);
        auto const above = shoot(np, 0, E0 + d);
        auto const at = shoot(np, 0, E0);
        CHECK(below.converged);
        CHECK(std::signbit(below.mismatch) != std::signbit(above.mismatch));
        CHECK(std::abs(at.mismatch) < 1e-3 * std::min(std::abs(below.mismatch), std::abs(above.mismatch)));
    }

    SUBCASE("Sturm ordering")
    {
        auto const low = shoot(np, 0, E0 - 1.0);
        auto const mid = shoot(np, 0, 0.5 * (E0 + E1));
        CHECK(low.level_index() == 0);
        CHECK(mid.level_index() == 1);
    }

    SUBCASE("node count at the n-th level")
    {
        for (unsigned J = 0; J <= 2; ++J) {
            for (unsigned n = 0; n <= 3; ++n) {
                CHECK(shoot(np, J, energy_physical(np, {n, J}).energy).node_count == n);
            }
        }
    }

    SUBCASE("scaling covariance")
    {
        for (double E : {E0 - 0.5, 0.5 * (E0 + E1), E1 + 0.1}) {
            auto const ref = shoot(np, 1, E);
            for (double k : {0.25, 1024.0, 0x1p-200}) {
                OracleConfig cfg;
                cfg.initial_scale = k;
                auto const s = shoot(np, 1, E, cfg);
                CHECK(s.mismatch == ref.mismatch);
                CHECK(s.node_count == ref.node_count);
            }
            for (double k : {3.7, 1e-30}) {
                OracleConfig cfg;
                cfg.initial_scale = k;
                auto const s = shoot(np, 1, E, cfg);
                CHECK(s.mismatch == doctest::Approx(ref.mismatch).epsilon(1e-8));
                CHECK(s.node_count == ref.node_count);
            }
        }
    }

    CHECK_THROWS_AS(shoot(np, 0, np.m), DomainError);
}

TEST_CASE("find_level")
{
    auto const np = reference_params();

    double const approx = find_level(np, {0, 0});
    CHECK(std::abs(approx - 872.47) <= 0.01);
    CHECK(dkp::test::rel_diff(approx, energy_physical(np, {0, 0}).energy) <= 1e-6);

    OracleConfig exact_cfg;
    exact_cfg.variant = Variant::exact;
    double const exact = find_level(np, {0, 0}, exact_cfg);
    MESSAGE("exact - approx ground state shift: " << exact - approx << " MeV");
    CHECK(std::abs(exact - approx) < 1.0);
    CHECK(exact != approx);

    NaturalParams free = np;
    free.g = 0.0;
    CHECK_THROWS_AS(find_level(free, {0, 0}), NoBoundState);
    CHECK_THROWS_AS(find_level(free, {2, 1}), NoBoundState);

    SUBCASE("ordering and error-target stability")
    {
        OracleConfig tight;
        tight.rel_error = 0.5e-12;
        for (unsigned J : {0u, 2u}) {
            auto const levels = find_levels(np, J, 3);
            auto const halved = find_levels(np, J, 3, tight);
            REQUIRE(levels.size() == 4);
            REQUIRE(halved.size() == 4);
            for (std::size_t n = 0; n < levels.size(); ++n) {
                if (n > 0) {
                    CHECK(levels[n] > levels[n - 1]);
                }
                CHECK(std::abs(levels[n] - halved[n]) <= 10.0 * tight.energy_tol * np.m);
            }
        }
    }
}

TEST_CASE("oracle agrees with the physical branch and not with the printed one")
{
    std::vector<std::future<void>> jobs;
    struct Row
    {
        double a_fm;
        unsigned J;
        std::vector<double> levels;
    };
    std::vector<Row> rows;
    for (double a_fm : {0.005, 0.015}) {
        for (unsigned J = 0; J <= 3; ++J) {
            rows.push_back({a_fm, J, {}});
        }
    }
    for (auto& row : rows) {
        jobs.push_back(std::async(std::launch::async, [&row] {
            row.levels = find_levels(reference_params(row.a_fm), row.J, 3);
        }));
    }
    for (auto& job : jobs) {
        job.get();
    }
    for (auto const& row : rows) {
        auto const np = reference_params(row.a_fm);
        REQUIRE(row.levels.size() == 4);
        for (unsigned n = 0; n <= 3; ++n) {
            double const E = row.levels[n];
            CHECK(std::abs(E - energy_physical(np, {n, row.J}).energy) / np.m <= 1e-6);
            CHECK(std::abs(E - energy_paper(np, {n, row.J}).energy) / np.m > 1e-2);
        }
    }
}

TEST_CASE("ode_residual")
{
    auto const np = reference_params();
    for (unsigned J : {0u, 2u}) {
        for (unsigned n : {0u, 1u, 3u}) {
            auto const level = energy_physical(np, {n, J});
            RadialFunction const F = radial_F(level, np);
            auto const grid = interior_grid(level.epsilon);
            double const approx = ode_residual(Variant::approx, evaluator(F), np, J, level.energy, grid);
            double const exact = ode_residual(Variant::exact, evaluator(F), np, J, level.energy, grid);
            CHECK(approx <= 1e-8);
            CHECK(exact >= 1e4 * approx);
        }
    }

    auto const zero = [](double) { return RadialSample{}; };
    auto const grid = geometric_grid(0.01, 10.0, 50);
    CHECK(ode_residual(Variant::approx, zero, np, 1, 900.0, grid) == 0.0);
    CHECK(ode_residual(Variant::exact, zero, np, 1, 900.0, grid) == 0.0);
}

TEST_CASE("system_residual")
{
    for (unsigned J : {1u, 2u}) {
        for (unsigned n : {0u, 1u}) {
            std::vector<double> residuals;
            for (double a_fm : {0.015, 0.010, 0.005}) {
                auto const np = reference_params(a_fm);
                auto const level = energy_physical(np, {n, J});
                SpinorSet const set = spinors(level, np);
                auto const grid = interior_grid(level.epsilon);
                double const sys = system_residual(set, np, J, level.energy, grid);
                double const ode = ode_residual(Variant::exact, evaluator(set.radial()), np, J, level.energy, grid);
                CHECK(std::isfinite(sys));
                CHECK(sys > 0.0);
                CHECK(sys <= 10.0 * ode);
                CHECK(ode <= 10.0 * sys);
                residuals.push_back(sys);
            }
            CHECK(residuals[1] < residuals[0]);
            CHECK(residuals[2] < residuals[1]);
        }
    }

    auto const np = reference_params();
    auto const level = energy_physical(np, {0, 1});
    SpinorSet const empty(level, np, radial_function(level, np).scaled(0.0), kHbarC);
    CHECK(system_residual(empty, np, 1, level.energy, interior_grid(level.epsilon)) == 0.0);
}

TEST_CASE("geometric_grid")
{
    auto const g = geometric_grid(1e-3, 1e3, 7);
    REQUIRE(g.size() == 7);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1e3);
    CHECK(g[3] == doctest::Approx(1.0).epsilon(1e-14));
}
