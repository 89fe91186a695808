#include "pumped/commands.hpp"
#include <array>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "pumped/dynamics.hpp"
#include "pumped/ensemble.hpp"
#include "pumped/errors.hpp"
#include "pumped/spectral.hpp"

namespace pumped {

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace {

std::string format_complex(Complex z) {
    return format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") +
           format_number(std::abs(z.imag())) + "i";
}

int map_errors(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what();
        if (e.line > 0) err << " (line " << e.line << ")";
        err << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        for (const std::string& f : e.failures) err << "  - " << f << "\n";
        return kExitValidation;
    } catch (const UnsupportedRelaxationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnboundedGrowthError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

void write_file(const std::string& dir, const std::string& name, const std::string& contents) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'", 0);
    out << contents;
}

std::vector<double> sample_grid(double t_end, std::size_t samples) {
    std::vector<double> times(samples);
    for (std::size_t k = 0; k < samples; ++k)
        times[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    return times;
}

constexpr double kFlatLyapunovFloor = 1e-24;  // M(0) below this counts as zero

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return map_errors(err, [&]() -> int {
        const std::size_t n = config.model.n;
        const Superoperator l = build_superoperator(config.model);
        const SpectralDecomposition dec = decompose(l);
        const MetricOperator metric = build_metric(dec);
        const DensityMatrix rho0 = steady_state(l, config.model.pump);
        const std::vector<double> times = sample_grid(config.t_end, config.samples);

        Trajectory spectral = propagate_spectral(dec, rho0, config.rho_init, times);
        attach_lyapunov(spectral, metric, rho0);
        const Trajectory direct =
            integrate_direct_at(l, config.model.pump, config.rho_init, config.dt, times);

        // trajectory.csv: spectral-method states
        std::ostringstream traj;
        traj << "t";
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j)
                traj << ",rho_" << i << "_" << j << "_re,rho_" << i << "_" << j << "_im";
        traj << ",total_population";
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j) traj << ",abs_coherence_" << i << "_" << j;
        traj << "\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const DensityMatrix& rho = spectral.states[k];
            traj << format_number(times[k]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    traj << "," << format_number(rho(i, j).real()) << ","
                         << format_number(rho(i, j).imag());
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += rho(i, i).real();
            traj << "," << format_number(total);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    traj << "," << format_number(std::abs(rho(i, j)));
            traj << "\n";
        }
        write_file(config.out_dir, "trajectory.csv", traj.str());

        // lyapunov.csv: normalized M and the entropy-like -log(M/M(0))
        const std::vector<double>& m_values = *spectral.lyapunov_values;
        const double m0 = m_values.front();
        std::ostringstream lyap;
        lyap << "t,m_omega_normalized,s_omega\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double m_norm = (m0 > kFlatLyapunovFloor) ? m_values[k] / m0 : 0.0;
            lyap << format_number(times[k]) << "," << format_number(m_norm) << ",";
            if (m_norm > 0.0)
                lyap << format_number(entropy(m_norm, EntropySign::minus));
            else
                lyap << "inf";
            lyap << "\n";
        }
        write_file(config.out_dir, "lyapunov.csv", lyap.str());

        // method_delta.csv: per-time max disagreement between the methods
        std::ostringstream delta;
        delta << "t,max_abs_delta\n";
        double worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            DensityMatrix d = spectral.states[k];
            d -= direct.states[k];
            worst = std::max(worst, d.max_abs());
            delta << format_number(times[k]) << "," << format_number(d.max_abs()) << "\n";
        }
        write_file(config.out_dir, "method_delta.csv", delta.str());

        out << "wrote trajectory.csv, lyapunov.csv, method_delta.csv to " << config.out_dir
            << "\n";
        out << "steady-state trace: " << format_number(rho0.trace().real()) << "\n";
        out << "max method delta:   " << format_number(worst) << "\n";
        return kExitOk;
    });
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return map_errors(err, [&]() -> int {
        const Superoperator l = build_superoperator(config.model);
        const SpectralDecomposition dec = decompose(l);
        const MetricOperator metric = build_metric(dec);
        const DensityMatrix rho0 = steady_state(l, config.model.pump);

        out << "eigenvalues:\n";
        for (Complex lambda : dec.eigenvalues) out << "  " << format_complex(lambda) << "\n";

        const ComplexVector canonical = vectorize(rho0);
        out << "steady state (canonical order";
        for (std::size_t i = 1; i <= config.model.n; ++i)
            for (std::size_t j = 1; j <= config.model.n; ++j) out << " rho_" << i << j;
        out << "):\n";
        for (std::size_t k = 0; k < canonical.size(); ++k)
            out << "  " << format_complex(canonical[k]) << "\n";
        if (config.model.n == 2) {
            out << "steady state (order rho_22 rho_21 rho_12 rho_11):\n";
            const ComplexVector ef = to_excited_first(canonical);
            for (std::size_t k = 0; k < 4; ++k) out << "  " << format_complex(ef[k]) << "\n";
        }

        const SimilarityResidual sim = verify_similarity(l, dec, metric);
        out << "similarity residual:        " << format_number(sim.max()) << "\n";
        out << "biorthonormality residual:  " << format_number(dec.biorthonormality_residual())
            << "\n";

        if (config.two_level) {
            const TwoLevelParams& p = *config.two_level;
            const double bound = 0.5 * (p.decay_1 + p.decay_2);
            out << "coherence decay check:      gamma = " << format_number(p.coherence_decay)
                << " >= (Gamma_1+Gamma_2)/2 = " << format_number(bound) << "  ["
                << (p.coherence_decay >= bound - 1e-12 ? "pass" : "FAIL") << "]\n";
        }
        return kExitOk;
    });
}

int cmd_sweep(const RunConfig& config, const std::string& param, double from, double to,
              std::size_t steps, std::ostream& out, std::ostream& err) {
    return map_errors(err, [&]() -> int {
        if (!config.two_level)
            throw ConfigError("sweep requires the two-level shorthand configuration", 0);
        if (steps < 2) throw ConfigError("sweep needs at least 2 steps", 0);

        auto apply = [&](TwoLevelParams p, double value) {
            if (param == "pump_1") p.pump_1 = value;
            else if (param == "pump_2") p.pump_2 = value;
            else if (param == "pump_21_re") p.pump_21 = Complex(value, p.pump_21.imag());
            else if (param == "pump_21_im") p.pump_21 = Complex(p.pump_21.real(), value);
            else if (param == "decay_1") p.decay_1 = value;
            else if (param == "decay_2") p.decay_2 = value;
            else if (param == "coherence_decay") p.coherence_decay = value;
            else if (param == "detuning") p.detuning = value;
            else if (param == "coupling_v") p.coupling = value;
            else throw ConfigError("unknown sweep parameter '" + param + "'", 0);
            return p;
        };

        std::ostringstream csv;
        csv << "param_value,population_difference_solve,population_difference_analytic,"
               "abs_deviation\n";
        for (std::size_t k = 0; k < steps; ++k) {
            const double value =
                from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
            const TwoLevelParams p = apply(*config.two_level, value);
            const ModelSpec model = to_model(p);
            const Superoperator l = build_superoperator(model);
            const DensityMatrix rho0 = steady_state(l, model.pump);
            const double diff = rho0(1, 1).real() - rho0(0, 0).real();
            csv << format_number(value) << "," << format_number(diff) << ",";
            if (p.decay_1 > 0.0 && p.decay_2 > 0.0) {
                const double analytic = analytic_population_difference(p);
                csv << format_number(analytic) << "," << format_number(std::abs(diff - analytic));
            } else {
                csv << ",";  // formula undefined at zero decay
            }
            csv << "\n";
        }
        write_file(config.out_dir, "sweep.csv", csv.str());
        out << "wrote sweep.csv to " << config.out_dir << "\n";
        return kExitOk;
    });
}

int cmd_ensemble_verify(const RunConfig& config, double quad_step, std::ostream& out,
                        std::ostream& err) {
    return map_errors(err, [&]() -> int {
        if (!(quad_step > 0.0)) throw ConfigError("quad-step must be positive", 0);
        const auto* decay = std::get_if<DecayClassRelaxation>(&config.model.relaxation);
        if (!decay)
            throw UnsupportedRelaxationError(
                "ensemble verification needs the decay-class shorthand model");

        const InjectionSpec spec = [&] {
            InjectionSpec s = injection_from_pump(config.model.pump);
            s.start_time = 0.0;  // verify in the transient regime
            return s;
        }();

        // a short uniform grid around t = 1 keeps the check in the transient
        std::vector<double> times;
        for (int k = -4; k <= 4; ++k) times.push_back(1.0 + quad_step * k);
        const EnsembleResult result = accumulate(spec, config.model.hamiltonian,
                                                 decay->population_decay, times, quad_step);
        const double residual = verify_master_equation(result, config.model);
        const double threshold = std::max(1e-4, 1e2 * quad_step * quad_step);

        out << "quadrature step:      " << format_number(quad_step) << "\n";
        out << "max residual:         " << format_number(residual) << "\n";
        out << "threshold:            " << format_number(threshold) << "\n";
        out << (residual <= threshold ? "PASS" : "FAIL") << "\n";
        return residual <= threshold ? kExitOk : kExitThreshold;
    });
}

int cmd_fixtures(std::ostream& out, std::ostream& err) {
    return map_errors(err, [&]() -> int {
        bool all_ok = true;
        for (int case_id = 1; case_id <= 4; ++case_id) {
            const ReferenceFixture fixture = reference_fixture(case_id);
            const ModelSpec model = to_model(fixture.params);
            const Superoperator l = build_superoperator(model);
            const SpectralDecomposition dec = decompose(l);
            const DensityMatrix rho0 = steady_state(l, model.pump);
            const ComplexVector ef = to_excited_first(vectorize(rho0));

            double eig_delta = 0.0;
            std::array<std::size_t, 4> match{};
            std::vector<bool> used(4, false);
            for (std::size_t k = 0; k < 4; ++k) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t best_j = 0;
                for (std::size_t j = 0; j < 4; ++j) {
                    if (used[j]) continue;
                    const double d = std::abs(dec.eigenvalues[j] - fixture.eigenvalues[k]);
                    if (d < best) {
                        best = d;
                        best_j = j;
                    }
                }
                used[best_j] = true;
                match[k] = best_j;
                eig_delta = std::max(eig_delta, best);
            }
            double rho_delta = 0.0;
            for (std::size_t k = 0; k < 4; ++k)
                rho_delta =
                    std::max(rho_delta, std::abs(ef[k] - fixture.steady_state_excited_first[k]));

            const bool ok = eig_delta <= 1e-3 && rho_delta <= 1e-6;
            all_ok = all_ok && ok;

            out << "case " << case_id << ":\n";
            out << "  eigenvalues (reference / recomputed):\n";
            for (std::size_t k = 0; k < 4; ++k)
                out << "    " << format_complex(fixture.eigenvalues[k]) << "  /  "
                    << format_complex(dec.eigenvalues[match[k]]) << "\n";
            out << "  steady state rho_22 rho_21 rho_12 rho_11 (reference / recomputed):\n";
            for (std::size_t k = 0; k < 4; ++k)
                out << "    " << format_complex(fixture.steady_state_excited_first[k]) << "  /  "
                    << format_complex(ef[k]) << "\n";
            out << "  max eigenvalue delta:   " << format_number(eig_delta)
                << "  (tolerance 0.001)\n";
            out << "  max steady-state delta: " << format_number(rho_delta)
                << "  (tolerance 1e-06)\n";
            out << "  " << (ok ? "PASS" : "FAIL") << "\n";
        }
        return all_ok ? kExitOk : kExitThreshold;
    });
}

}  // namespace pumped
