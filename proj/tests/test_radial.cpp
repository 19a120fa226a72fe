#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "vfb/params.hpp"
#include "vfb/radial.hpp"
#include "vfb/weights.hpp"

using namespace vfb;

namespace {

std::vector<double> affine_map(const RadialGrid& g, double lam)
{
    std::vector<double> phi(g.n);
    for (int j = 0; j < g.n; ++j) phi[j] = lam * g.r[j];
    return phi;
}

} // namespace

TEST_CASE("flux divergence is exact in form on affine maps")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(1e-3, eos.alpha);
    double lam = 1.2;
    double scale = std::pow(lam, -(1.0 + eos.beta));

    // interior truncation for gamma=2 is exactly r h^2 scale / (1-r^2);
    // the factored region past r_asymptotic and the boundary node are exact
    auto run_level = [&](int n) {
        SolverConfig cfg;
        cfg.n = n;
        RadialSolver solver(eos, prof, cfg);
        std::vector<double> L =
            solver.degenerate_flux_divergence(affine_map(solver.grid(), lam));
        return std::pair<RadialGrid, std::vector<double>>(solver.grid(), L);
    };

    auto [g65, L65] = run_level(65);
    double max_err = 0.0;
    for (int j = 0; j < g65.n; ++j) {
        double exact = -2.0 * g65.r[j] * (1.0 + eos.alpha) * scale;
        max_err = std::max(max_err, std::abs(L65[j] - exact));
    }
    CHECK(max_err <= 1e-3);

    // boundary node uses the closed-form vacuum limit: machine accurate
    CHECK(L65[g65.n - 1]
          == doctest::Approx(-2.0 * (1.0 + eos.alpha) * scale).epsilon(1e-13));

    // pointwise second order at r = 0.5
    auto [g129, L129] = run_level(129);
    double exact_half = -2.0 * 0.5 * (1.0 + eos.alpha) * scale;
    double e65 = std::abs(L65[32] - exact_half);
    double e129 = std::abs(L129[64] - exact_half);
    CHECK(e65 / e129 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("radial reduction matches the cartesian tensor divergence")
{
    EnthalpyProfile prof = model_profile(1.0, 1.0);
    for (const RadialMapSpec& map : divergence_test_maps()) {
        for (double r : {0.35, 0.6}) {
            double exact = radial_divergence_exact(map, prof, prof.alpha, r);
            Vec3 x{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
            Vec3 d1v = cartesian_flux_divergence(map, prof, prof.alpha, x, 2.0 / 32);
            Vec3 d2v = cartesian_flux_divergence(map, prof, prof.alpha, x, 2.0 / 64);
            double e1 = 0.0, e2 = 0.0;
            for (int i = 0; i < 3; ++i) {
                e1 = std::max(e1, std::abs(d1v[i] - exact * x[i] / r));
                e2 = std::max(e2, std::abs(d2v[i] - exact * x[i] / r));
            }
            CHECK(e1 <= 5e-2);
            CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.35));
        }
    }
}

TEST_CASE("pure damping closed form at delta = 0")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(0.0, eos.alpha);
    SolverConfig cfg;
    cfg.n = 65;
    cfg.dtau = 1e-2;
    cfg.tau_max = 1.0;
    cfg.output_stride = 10;
    RadialSolver solver(eos, prof, cfg);
    double v0 = 0.1;
    RadialRun run = solver.run([](double r) { return r; },
                               [v0](double r) { return v0 * r; });
    REQUIRE(run.status == RunStatus::Completed);
    for (const RadialFrame& fr : run.frames) {
        double fac = 1.0 + v0 * (1.0 - std::exp(-fr.tau));
        for (int j = 0; j < cfg.n; ++j) {
            double r = j / 64.0;
            CHECK(std::abs(fr.phi[j] - fac * r) <= 1e-9);
            CHECK(std::abs(fr.nu[j] - v0 * std::exp(-fr.tau) * r) <= 1e-9);
        }
    }
}

TEST_CASE("wave speed at the identity state")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(0.02, eos.alpha);
    SolverConfig cfg;
    cfg.n = 33;
    RadialSolver solver(eos, prof, cfg);
    std::vector<double> phi = affine_map(solver.grid(), 1.0);
    // c^2 = delta (1+1/alpha) W peaks at the center where W = 1
    CHECK(solver.max_wave_speed(0.0, phi)
          == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("cfl refusal")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(1.0, eos.alpha);
    SolverConfig cfg;
    cfg.n = 65;
    cfg.dtau = 0.1;
    cfg.tau_max = 1.0;
    RadialSolver solver(eos, prof, cfg);
    RadialRun run = solver.run([](double r) { return r; },
                               [](double) { return 0.0; });
    CHECK(run.status == RunStatus::CflViolation);
    CHECK(!run.message.empty());
}

TEST_CASE("inadmissible states are rejected")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(0.0, eos.alpha);
    SolverConfig cfg;
    cfg.n = 65;
    cfg.dtau = 1e-2;
    cfg.tau_max = 1.0;
    RadialSolver solver(eos, prof, cfg);

    // initial map already folds over
    RadialRun bad0 = solver.run([](double r) { return r * (1.0 - 2.0 * r * r); },
                                [](double) { return 0.0; });
    CHECK(bad0.status == RunStatus::InvertedMap);
    CHECK(bad0.message.find("initial data") != std::string::npos);
    CHECK(bad0.frames.empty());

    // strong inward velocity collapses the map mid-run (no pressure at
    // delta = 0 to stop it)
    RadialRun badrun = solver.run([](double r) { return r; },
                                  [](double r) { return -3.0 * r; });
    CHECK(badrun.status == RunStatus::InvertedMap);
    CHECK(badrun.message.find("tau") != std::string::npos);
}

TEST_CASE("frame bookkeeping")
{
    EquationOfState eos = make_eos(2.0);
    EnthalpyProfile prof = model_profile(1e-4, eos.alpha);
    SolverConfig cfg;
    cfg.n = 33;
    cfg.dtau = 0.1;
    cfg.tau_max = 1.0;
    cfg.output_stride = 3;
    RadialSolver solver(eos, prof, cfg);
    RadialRun run = solver.run([](double r) { return r; },
                               [](double) { return 0.0; });
    REQUIRE(run.status == RunStatus::Completed);
    REQUIRE(run.frames.size() == 5); // tau = 0, 0.3, 0.6, 0.9, 1.0
    CHECK(run.frames.front().tau == 0.0);
    CHECK(run.frames.back().tau == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run.frame_dtau == doctest::Approx(0.3).epsilon(1e-12));
    for (std::size_t i = 1; i < run.frames.size(); ++i)
        CHECK(run.frames[i].tau > run.frames[i - 1].tau);
}
