#pragma once

#include <optional>
#include <vector>

#include "pumped/model.hpp"
#include "pumped/spectral.hpp"
#include "pumped/tolerances.hpp"

namespace pumped {

enum class PropagationMethod { spectral, direct };

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::optional<std::vector<double>> lyapunov_values;
    PropagationMethod method = PropagationMethod::spectral;
};

/// Expansion coefficients r_nu = <<y_nu | delta_rho(0)>> of a deviation in
/// the right eigenbasis.
struct ModeAmplitudes {
    std::vector<Complex> values;
};

/// rho0 = -L^-1 Lambda. Throws TrappedSubspaceError when L is singular.
DensityMatrix steady_state(const Superoperator& l, const PumpMatrix& pump,
                           const Tolerances& tols = default_tolerances());

ModeAmplitudes mode_amplitudes(const SpectralDecomposition& dec, const DensityMatrix& delta_rho0,
                               const Tolerances& tols = default_tolerances());

/// rho(t) = rho0 + sum_nu r_nu exp(lambda_nu t) x_nu, evaluated on the given
/// strictly increasing time grid.
Trajectory propagate_spectral(const SpectralDecomposition& dec, const DensityMatrix& rho0,
                              const DensityMatrix& rho_init, const std::vector<double>& times,
                              const Tolerances& tols = default_tolerances());

/// Classic fixed-step 4th-order integration of d/dt rho = Lambda + L rho from
/// t = 0 to t_end; the step actually used is t_end / ceil(t_end / dt) and
/// every step is recorded. Throws InstabilityError on norm blow-up.
Trajectory integrate_direct(const Superoperator& l, const PumpMatrix& pump,
                            const DensityMatrix& rho_init, double dt, double t_end,
                            const Tolerances& tols = default_tolerances());

/// Same integrator, but recording exactly at the given times (each interval
/// is covered by uniform substeps no longer than dt). times[0] must be 0.
Trajectory integrate_direct_at(const Superoperator& l, const PumpMatrix& pump,
                               const DensityMatrix& rho_init, double dt,
                               const std::vector<double>& times,
                               const Tolerances& tols = default_tolerances());

/// M_Omega = <<delta_rho| Omega |delta_rho>>. Real and nonnegative; an
/// imaginary residue beyond tolerance throws MetricCorruptionError.
double lyapunov(const MetricOperator& m, const DensityMatrix& delta_rho,
                const Tolerances& tols = default_tolerances());

/// Fills traj.lyapunov_values with M_Omega(rho(t) - rho0) and checks the
/// monotonicity invariant.
void attach_lyapunov(Trajectory& traj, const MetricOperator& m, const DensityMatrix& rho0,
                     const Tolerances& tols = default_tolerances());

/// d/dt M_Omega = sum_nu |r_nu|^2 (lambda_nu + conj(lambda_nu))
///                exp[(lambda_nu + conj(lambda_nu)) t]  <= 0.
double lyapunov_rate(const SpectralDecomposition& dec, const ModeAmplitudes& r, double t);

enum class EntropySign { plus, minus };

/// S = +-log(M). Throws DomainError for M <= 0 (steady state reached).
double entropy(double m_omega, EntropySign sign);

/// Diagnostics over a trajectory: diagonal positivity violations, plus the
/// minimum of rho11 rho22 - |rho12|^2 for two-level states (reported, not
/// asserted, in the driven case).
struct PositivityReport {
    struct Violation {
        double time;
        std::size_t level;
        double value;
    };
    std::vector<Violation> diagonal_violations;
    std::optional<double> min_two_level_determinant;
    std::optional<double> min_two_level_determinant_time;

    bool clean() const { return diagonal_violations.empty(); }
};

PositivityReport positivity_monitor(const Trajectory& traj,
                                    const Tolerances& tols = default_tolerances());

}  // namespace pumped
