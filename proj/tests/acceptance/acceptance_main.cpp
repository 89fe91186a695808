// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here; the runtime budget is part of the check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pumped/dynamics.hpp"
#include "pumped/ensemble.hpp"
#include "pumped/spectral.hpp"
#include "pumped/twolevel.hpp"
#include "../test_support.hpp"

using namespace pumped;
using testsup::Rng;

namespace {

struct Criterion {
    bool passed;
    std::string metric;
};

struct Runner {
    int failures = 0;

    void run(int number, const std::string& name, double time_budget_s,
             const std::function<Criterion()>& body) {
        const auto start = std::chrono::steady_clock::now();
        Criterion result{false, "exception"};
        try {
            result = body();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > time_budget_s) {
            result.passed = false;
            result.metric += " [over time budget]";
        }
        if (!result.passed) ++failures;
        std::printf("[%s] %2d %-34s %s (%.2fs / budget %.0fs)\n",
                    result.passed ? "PASS" : "FAIL", number, name.c_str(),
                    result.metric.c_str(), elapsed, time_budget_s);
        std::fflush(stdout);
    }
};

struct FixtureData {
    ReferenceFixture fixture;
    ModelSpec model;
    Superoperator l;
    SpectralDecomposition dec;
    MetricOperator metric;
    DensityMatrix rho0;
    DensityMatrix rho_init;  // the documented starting state of each case
};

FixtureData make_fixture(int case_id) {
    FixtureData d{reference_fixture(case_id), {}, {}, {}, {}, {}, {}};
    d.model = to_model(d.fixture.params);
    d.l = build_superoperator(d.model);
    d.dec = decompose(d.l);
    d.metric = build_metric(d.dec);
    d.rho0 = steady_state(d.l, d.model.pump);
    d.rho_init = DensityMatrix(2, 2);
    if (case_id >= 3) d.rho_init(1, 1) = 1.0;
    return d;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// criterion-3 parameter distribution, shared with criterion 8
TwoLevelParams draw_interior(Rng& rng) {
    TwoLevelParams p;
    p.decay_1 = rng.uniform(0.1, 5.0);
    p.decay_2 = rng.uniform(0.1, 5.0);
    p.coherence_decay = 0.5 * (p.decay_1 + p.decay_2) + rng.uniform(0.0, 5.0);
    p.pump_1 = rng.uniform(0.0, 5.0);
    p.pump_2 = rng.uniform(0.0, 5.0);
    p.detuning = rng.uniform(-10.0, 10.0);
    p.coupling = rng.uniform(0.0, 10.0);
    return p;
}

double solve_difference(const TwoLevelParams& p) {
    const ModelSpec model = to_model(p);
    const DensityMatrix rho0 = steady_state(build_superoperator(model), model.pump);
    return rho0(1, 1).real() - rho0(0, 0).real();
}

}  // namespace

int main() {
    Runner runner;
    std::vector<FixtureData> cases;
    for (int id = 1; id <= 4; ++id) cases.push_back(make_fixture(id));

    // 1. eigenvalue regression against the reference values
    runner.run(1, "fixture eigenvalue regression", 1.0, [&]() -> Criterion {
        double worst = 0.0;
        for (const FixtureData& d : cases) {
            std::vector<Complex> reference(d.fixture.eigenvalues.begin(),
                                         d.fixture.eigenvalues.end());
            worst = std::max(worst, testsup::eigenvalue_match_delta(d.dec.eigenvalues, reference));
        }
        return {worst <= 1e-3, "max |delta lambda| = " + fmt(worst) + " (tol 1e-3)"};
    });

    // 2. steady-state regression against the reference vectors
    runner.run(2, "fixture steady-state regression", 1.0, [&]() -> Criterion {
        double worst = 0.0;
        for (const FixtureData& d : cases) {
            const ComplexVector ef = to_excited_first(vectorize(d.rho0));
            for (std::size_t k = 0; k < 4; ++k)
                worst = std::max(worst,
                                 std::abs(ef[k] - d.fixture.steady_state_excited_first[k]));
        }
        return {worst <= 1e-6, "max |delta rho0| = " + fmt(worst) + " (tol 1e-6)"};
    });

    // 3. closed-form population difference vs linear solve, 100 random draws
    runner.run(3, "population-difference cross-check", 5.0, [&]() -> Criterion {
        Rng rng(1003);
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const TwoLevelParams p = draw_interior(rng);
            const double analytic = analytic_population_difference(p);
            const double solved = solve_difference(p);
            const double scale = std::max(std::abs(analytic), std::abs(solved));
            const double err = std::abs(analytic - solved);
            if (err > 1e-14)  // absolute floor for the balanced-pumping zeros
                worst = std::max(worst, err / scale);
        }
        return {worst <= 1e-10, "max relative deviation = " + fmt(worst) + " (tol 1e-10)"};
    });

    // 4. closed-upper-level limit at cases 1 and 2
    runner.run(4, "decay-free upper-level limit", 1.0, [&]() -> Criterion {
        double worst = 0.0;
        const double expected[2] = {0.0625, 0.3125};
        for (int id = 1; id <= 2; ++id) {
            const FixtureData& d = cases[id - 1];
            const double limit = gamma2_zero_limit_difference(d.fixture.params);
            const double solved = d.rho0(1, 1).real() - d.rho0(0, 0).real();
            worst = std::max(worst, std::abs(limit - solved));
            worst = std::max(worst, std::abs(limit - expected[id - 1]));
        }
        return {worst <= 1e-9, "max deviation = " + fmt(worst) + " (tol 1e-9)"};
    });

    // 5. Lyapunov monotone decay on a 2000-point grid for all four cases
    runner.run(5, "Lyapunov monotone decay", 5.0, [&]() -> Criterion {
        double worst_slack = 0.0, worst_tail = 0.0;
        std::vector<double> times(2000);
        for (std::size_t k = 0; k < times.size(); ++k)
            times[k] = 20.0 * static_cast<double>(k) / static_cast<double>(times.size() - 1);
        for (const FixtureData& d : cases) {
            Trajectory traj = propagate_spectral(d.dec, d.rho0, d.rho_init, times);
            attach_lyapunov(traj, d.metric, d.rho0);
            const std::vector<double>& m = *traj.lyapunov_values;
            for (std::size_t k = 0; k + 1 < m.size(); ++k)
                worst_slack = std::max(worst_slack, (m[k + 1] - m[k]) / m.front());
            worst_tail = std::max(worst_tail, m.back() / m.front());
        }
        const bool ok = worst_slack <= 1e-10 && worst_tail <= 1e-6;
        return {ok, "max increase = " + fmt(worst_slack) + " (tol 1e-10), terminal = " +
                        fmt(worst_tail) + " (tol 1e-6)"};
    });

    // 6. spectral propagation vs fixed-step integration, fixtures + 20 random
    runner.run(6, "method agreement (oracle)", 30.0, [&]() -> Criterion {
        double worst = 0.0;
        auto compare = [&](const Superoperator& l, const PumpMatrix& pump,
                           const SpectralDecomposition& dec, const DensityMatrix& rho0,
                           const DensityMatrix& init) {
            const Trajectory direct = integrate_direct(l, pump, init, 1e-3, 20.0);
            const Trajectory spectral = propagate_spectral(dec, rho0, init, direct.times);
            for (std::size_t k = 0; k < direct.times.size(); ++k)
                worst = std::max(worst,
                                 testsup::max_abs_diff(direct.states[k], spectral.states[k]));
        };
        for (const FixtureData& d : cases) compare(d.l, d.model.pump, d.dec, d.rho0, d.rho_init);
        Rng rng(1006);
        for (int rep = 0; rep < 20; ++rep) {
            const ModelSpec model = to_model(testsup::random_two_level(rng));
            const Superoperator l = build_superoperator(model);
            const SpectralDecomposition dec = decompose(l);
            const DensityMatrix rho0 = steady_state(l, model.pump);
            compare(l, model.pump, dec, rho0, testsup::random_two_level_state(rng));
        }
        return {worst <= 1e-6, "max |delta| = " + fmt(worst) + " (tol 1e-6)"};
    });

    // 7. structural identities on fixtures plus 100 random stable generators
    runner.run(7, "structural identities", 10.0, [&]() -> Criterion {
        double worst = 0.0;
        auto check = [&](const ComplexMatrix& l, const SpectralDecomposition& dec,
                         const MetricOperator& m) {
            worst = std::max(worst, dec.biorthonormality_residual());
            worst = std::max(worst, dec.completeness_residual());
            ComplexMatrix recon = reconstruct(dec);
            recon -= l;
            worst = std::max(worst, recon.frobenius_norm() / l.frobenius_norm());
            worst = std::max(worst, verify_similarity(l, dec, m).max());
            worst = std::max(worst, conjugate_pair_orthogonality(dec, m));
        };
        for (const FixtureData& d : cases) check(d.l.matrix, d.dec, d.metric);
        Rng rng(1007);
        for (int rep = 0; rep < 100; ++rep) {
            const ComplexMatrix l = testsup::random_stable(rng, 4);
            const SpectralDecomposition dec = decompose(l);
            check(l, dec, build_metric(dec));
        }
        return {worst <= 1e-7, "max residual = " + fmt(worst) + " (tol 1e-7)"};
    });

    // 8. incoherence parameter bound eta^2 >= 4
    runner.run(8, "incoherence parameter bound", 1.0, [&]() -> Criterion {
        Rng rng(1003);  // same draws as criterion 3
        double min_eta2 = 1e300;
        for (int rep = 0; rep < 100; ++rep)
            min_eta2 = std::min(min_eta2, eta_squared(draw_interior(rng)));
        TwoLevelParams equality;
        equality.decay_1 = equality.decay_2 = equality.coherence_decay = 1.0;
        const double at_equality = eta_squared(equality);
        const bool ok = min_eta2 >= 4.0 - 1e-12 && std::abs(at_equality - 4.0) <= 1e-12;
        return {ok, "min eta^2 = " + fmt(min_eta2) + " (>= 4), equality point = " +
                        fmt(at_equality)};
    });

    // 9. injected-trajectory ensemble satisfies the evolution equation
    runner.run(9, "ensemble quadrature oracle", 30.0, [&]() -> Criterion {
        Rng rng(1009);
        double worst_residual = 0.0, worst_ratio_low = 1e300, worst_ratio_high = 0.0;
        std::vector<TwoLevelParams> models{cases[0].fixture.params};
        for (int rep = 0; rep < 2; ++rep) {
            TwoLevelParams p = testsup::random_two_level(rng, /*representable=*/true);
            p.decay_1 = std::max(p.decay_1, 0.3);
            p.decay_2 = std::max(p.decay_2, 0.3);
            p.coherence_decay = 0.5 * (p.decay_1 + p.decay_2);
            models.push_back(p);
        }
        for (const TwoLevelParams& p : models) {
            const ModelSpec model = to_model(p);
            const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation);
            InjectionSpec spec = injection_from_pump(model.pump);
            spec.start_time = 0.0;
            double residuals[2];
            int slot = 0;
            for (double step : {1e-3, 5e-4}) {
                const EnsembleResult ens =
                    accumulate(spec, model.hamiltonian, decay->population_decay,
                               testsup::centered_grid(1.0, step, 3), step);
                residuals[slot++] = verify_master_equation(ens, model);
            }
            worst_residual = std::max(worst_residual, residuals[0]);
            const double ratio = residuals[0] / std::max(residuals[1], 1e-300);
            worst_ratio_low = std::min(worst_ratio_low, ratio);
            worst_ratio_high = std::max(worst_ratio_high, ratio);
        }
        const bool ok =
            worst_residual <= 1e-4 && worst_ratio_low >= 3.0 && worst_ratio_high <= 5.5;
        return {ok, "max residual = " + fmt(worst_residual) +
                        " (tol 1e-4), refinement ratios in [" + fmt(worst_ratio_low) + ", " +
                        fmt(worst_ratio_high) + "] (expect ~4)"};
    });

    // 10. eigenvalue sum identity
    runner.run(10, "eigenvalue-sum identity", 1.0, [&]() -> Criterion {
        double worst = 0.0;
        const double expected_sum[4] = {-2.0, -2.0, -4.0, -4.0};
        for (std::size_t k = 0; k < 4; ++k) {
            Complex sum{};
            for (Complex lambda : cases[k].dec.eigenvalues) sum += lambda;
            worst = std::max(worst, std::abs(sum - expected_sum[k]));
        }
        Rng rng(1010);
        for (int rep = 0; rep < 100; ++rep) {
            const TwoLevelParams p = testsup::random_two_level(rng);
            Complex sum{};
            for (const Eigenpair& e : eig_general(build_superoperator(to_model(p)).matrix))
                sum += e.value;
            const double expected = -(p.decay_1 + p.decay_2 + 2.0 * p.coherence_decay);
            worst = std::max(worst, std::abs(sum - expected));
        }
        return {worst <= 1e-10, "max |sum - (-Gamma_1-Gamma_2-2gamma)| = " + fmt(worst) +
                                    " (tol 1e-10)"};
    });

    if (runner.failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", runner.failures);
    return 1;
}
