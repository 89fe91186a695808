#include "pumped/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pumped/errors.hpp"

namespace pumped {

namespace {

void check_state_shape(const Superoperator& l, const ComplexMatrix& state, const char* who) {
    if (state.rows() != l.levels || state.cols() != l.levels)
        throw DimensionError(std::string(who) + ": state dimension mismatch");
}

void check_trajectory(const Trajectory& traj, const Tolerances& tols) {
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k)
        if (!(traj.times[k] < traj.times[k + 1]))
            throw DomainError("trajectory times must be strictly increasing");
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        if (traj.states[k].hermiticity_defect() > tols.hermiticity_state)
            throw MetricCorruptionError("propagated state lost Hermiticity at t = " +
                                        std::to_string(traj.times[k]));
}

}  // namespace

DensityMatrix steady_state(const Superoperator& l, const PumpMatrix& pump,
                           const Tolerances& tols) {
    check_state_shape(l, pump, "steady_state");
    ComplexVector rhs = vectorize(pump);
    rhs *= -1.0;
    ComplexVector solution;
    try {
        solution = solve_linear(l.matrix, rhs, tols);
    } catch (const SingularMatrixError& e) {
        throw TrappedSubspaceError(
            std::string("generator is singular; a trapped subspace admits no pumped steady "
                        "state (") +
            e.what() + ")");
    }
    DensityMatrix rho0 = unvectorize(solution, l.levels);

    const double pump_norm = pump.frobenius_norm();
    ComplexVector residual = l.matrix * vectorize(rho0) + vectorize(pump);
    if (residual.norm() > tols.steady_residual * std::max(pump_norm, 1e-300) && pump_norm > 0.0)
        throw TrappedSubspaceError("steady-state residual " + std::to_string(residual.norm()) +
                                   " exceeds tolerance");
    if (rho0.hermiticity_defect() > tols.hermiticity_state)
        throw MetricCorruptionError("steady state lost Hermiticity");
    for (std::size_t i = 0; i < l.levels; ++i)
        if (rho0(i, i).real() < -tols.population_floor)
            throw DomainError("steady-state population " + std::to_string(i + 1) +
                              " is negative: " + std::to_string(rho0(i, i).real()));
    return rho0;
}

ModeAmplitudes mode_amplitudes(const SpectralDecomposition& dec, const DensityMatrix& delta_rho0,
                               const Tolerances& tols) {
    const ComplexVector v = vectorize(delta_rho0);
    if (v.size() != dec.right_vectors.front().size())
        throw DimensionError("mode_amplitudes: state dimension mismatch");

    ModeAmplitudes r;
    r.values.reserve(dec.size());
    for (std::size_t nu = 0; nu < dec.size(); ++nu)
        r.values.push_back(inner(dec.left_vectors[nu], v));

    // the expansion must reproduce the deviation
    ComplexVector recon(v.size());
    for (std::size_t nu = 0; nu < dec.size(); ++nu)
        recon += r.values[nu] * dec.right_vectors[nu];
    recon -= v;
    const double scale = std::max(1.0, vectorize(delta_rho0).norm());
    if (recon.norm() > tols.mode_reconstruction * scale)
        throw DefectiveMatrixError("mode expansion fails to reproduce the initial deviation");
    return r;
}

Trajectory propagate_spectral(const SpectralDecomposition& dec, const DensityMatrix& rho0,
                              const DensityMatrix& rho_init, const std::vector<double>& times,
                              const Tolerances& tols) {
    if (times.empty()) throw DomainError("propagate_spectral: empty time grid");
    const std::size_t n = rho0.rows();
    DensityMatrix delta0 = rho_init;
    delta0 -= rho0;
    const ModeAmplitudes r = mode_amplitudes(dec, delta0, tols);

    Trajectory traj;
    traj.method = PropagationMethod::spectral;
    traj.times = times;
    traj.states.reserve(times.size());
    const ComplexVector rho0_vec = vectorize(rho0);
    for (double t : times) {
        ComplexVector v = rho0_vec;
        for (std::size_t nu = 0; nu < dec.size(); ++nu) {
            const Complex amp = r.values[nu] * std::exp(dec.eigenvalues[nu] * t);
            v += amp * dec.right_vectors[nu];
        }
        traj.states.push_back(unvectorize(v, n));
    }
    check_trajectory(traj, tols);
    return traj;
}

namespace {

// one RK4 step of v' = b + A v
void rk4_step(const ComplexMatrix& a, const ComplexVector& b, ComplexVector& v, double h) {
    const ComplexVector k1 = b + a * v;
    const ComplexVector k2 = b + a * (v + (0.5 * h) * k1);
    const ComplexVector k3 = b + a * (v + (0.5 * h) * k2);
    const ComplexVector k4 = b + a * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate_direct(const Superoperator& l, const PumpMatrix& pump,
                            const DensityMatrix& rho_init, double dt, double t_end,
                            const Tolerances& tols) {
    if (!(dt > 0.0)) throw DomainError("integrate_direct: dt must be positive");
    if (!(t_end >= dt)) throw DomainError("integrate_direct: t_end must be at least dt");
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    std::vector<double> times(steps + 1);
    const double h = t_end / static_cast<double>(steps);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = h * static_cast<double>(k);
    times.back() = t_end;
    return integrate_direct_at(l, pump, rho_init, dt, times, tols);
}

Trajectory integrate_direct_at(const Superoperator& l, const PumpMatrix& pump,
                               const DensityMatrix& rho_init, double dt,
                               const std::vector<double>& times, const Tolerances& tols) {
    check_state_shape(l, rho_init, "integrate_direct");
    check_state_shape(l, pump, "integrate_direct");
    if (!(dt > 0.0)) throw DomainError("integrate_direct: dt must be positive");
    if (times.empty() || times.front() != 0.0)
        throw DomainError("integrate_direct: time grid must start at 0");

    const ComplexVector b = vectorize(pump);
    ComplexVector v = vectorize(rho_init);
    const double initial_scale = std::max({v.norm(), b.norm(), 1.0});
    const double blowup = tols.blowup_factor * initial_scale;

    Trajectory traj;
    traj.method = PropagationMethod::direct;
    traj.times = times;
    traj.states.reserve(times.size());
    traj.states.push_back(rho_init);

    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double span = times[k + 1] - times[k];
        if (!(span > 0.0)) throw DomainError("integrate_direct: times must be increasing");
        const std::size_t sub = static_cast<std::size_t>(std::ceil(span / dt - 1e-12));
        const double h = span / static_cast<double>(std::max<std::size_t>(sub, 1));
        for (std::size_t s = 0; s < std::max<std::size_t>(sub, 1); ++s) {
            rk4_step(l.matrix, b, v, h);
            if (!v.is_finite() || v.norm() > blowup)
                throw InstabilityError("integration diverged near t = " +
                                       std::to_string(times[k] + h * static_cast<double>(s + 1)) +
                                       "; reduce the step");
        }
        traj.states.push_back(unvectorize(v, l.levels));
    }
    check_trajectory(traj, tols);
    return traj;
}

double lyapunov(const MetricOperator& m, const DensityMatrix& delta_rho, const Tolerances& tols) {
    const ComplexVector v = vectorize(delta_rho);
    if (v.size() != m.omega.rows()) throw DimensionError("lyapunov: dimension mismatch");
    const Complex q = inner(v, m.omega * v);
    const double scale = std::max(1.0, std::abs(q));
    if (std::abs(q.imag()) > tols.lyapunov_imag * scale)
        throw MetricCorruptionError("metric form produced imaginary residue " +
                                    std::to_string(q.imag()));
    if (q.real() < -tols.lyapunov_floor)
        throw MetricCorruptionError("metric form produced negative value " +
                                    std::to_string(q.real()));
    return std::max(q.real(), 0.0);
}

void attach_lyapunov(Trajectory& traj, const MetricOperator& m, const DensityMatrix& rho0,
                     const Tolerances& tols) {
    std::vector<double> values;
    values.reserve(traj.states.size());
    for (const DensityMatrix& state : traj.states) {
        DensityMatrix delta = state;
        delta -= rho0;
        values.push_back(lyapunov(m, delta, tols));
    }
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        if (values[k + 1] > values[k] + tols.lyapunov_slack)
            throw MetricCorruptionError("Lyapunov functional increased between t = " +
                                        std::to_string(traj.times[k]) + " and t = " +
                                        std::to_string(traj.times[k + 1]));
    traj.lyapunov_values = std::move(values);
}

double lyapunov_rate(const SpectralDecomposition& dec, const ModeAmplitudes& r, double t) {
    if (r.values.size() != dec.size())
        throw DimensionError("lyapunov_rate: amplitude count mismatch");
    double rate = 0.0;
    for (std::size_t nu = 0; nu < dec.size(); ++nu) {
        const double two_re = 2.0 * dec.eigenvalues[nu].real();
        rate += std::norm(r.values[nu]) * two_re * std::exp(two_re * t);
    }
    return rate;
}

double entropy(double m_omega, EntropySign sign) {
    if (!(m_omega > 0.0))
        throw DomainError("entropy undefined for M <= 0 (steady state reached)");
    const double log_m = std::log(m_omega);
    return sign == EntropySign::plus ? log_m : -log_m;
}

PositivityReport positivity_monitor(const Trajectory& traj, const Tolerances& tols) {
    PositivityReport report;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const DensityMatrix& rho = traj.states[k];
        for (std::size_t i = 0; i < rho.rows(); ++i)
            if (rho(i, i).real() < -tols.population_floor)
                report.diagonal_violations.push_back(
                    {traj.times[k], i + 1, rho(i, i).real()});
        if (rho.rows() == 2) {
            const double det = rho(0, 0).real() * rho(1, 1).real() - std::norm(rho(0, 1));
            if (!report.min_two_level_determinant || det < *report.min_two_level_determinant) {
                report.min_two_level_determinant = det;
                report.min_two_level_determinant_time = traj.times[k];
            }
        }
    }
    return report;
}

}  // namespace pumped
