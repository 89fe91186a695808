#pragma once

#include <optional>
#include <vector>

#include "pumped/linalg.hpp"
#include "pumped/model.hpp"
#include "pumped/tolerances.hpp"

namespace pumped {

/// Pure states injected into the system at random times, with normalized
/// weights and an overall injection rate.
struct InjectionSpec {
    struct State {
        ComplexVector amplitudes;  // unit norm
        double weight;             // P_psi >= 0, weights sum to 1
    };
    std::vector<State> states;
    double rate = 0.0;  // 1/time
    /// Injection begins here. Empty selects a finite stand-in for -infinity:
    /// far enough back that the surviving amplitude of the earliest
    /// trajectory is below 1e-12.
    std::optional<double> start_time;

    void validate(const Tolerances& tols = default_tolerances()) const;
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<DensityMatrix> states;  // accumulated rho~(t)
    double quadrature_step = 0.0;
};

/// Amplitude propagator for one injected system: c(tau) = exp(-i H_eff tau) c(0)
/// with H_eff = H - (i/2) diag(Gamma), computed through the spectral
/// decomposition of H_eff (cached across calls).
class SingleSystemPropagator {
public:
    SingleSystemPropagator(const ComplexMatrix& hamiltonian,
                           const std::vector<double>& population_decay,
                           const Tolerances& tols = default_tolerances());

    ComplexVector evolve(const ComplexVector& c0, double tau) const;

    /// Slowest decay rate of |c|^2; zero for a norm-preserving evolution.
    double slowest_decay_rate() const { return slowest_decay_rate_; }
    std::size_t dim() const { return dim_; }

private:
    std::size_t dim_;
    std::vector<Complex> eigenvalues_;          // of -i H_eff
    std::vector<ComplexVector> eigenvectors_;
    ComplexMatrix basis_inverse_;
    double slowest_decay_rate_;
};

/// c(tau) for a single injected state.
ComplexVector evolve_single(const ComplexMatrix& hamiltonian,
                            const std::vector<double>& population_decay,
                            const ComplexVector& c0, double tau,
                            const Tolerances& tols = default_tolerances());

/// rho~_nm(t) = rate * sum_psi P_psi Int_{start}^{t} c_n(t-t0) c*_m(t-t0) dt0,
/// evaluated by the composite trapezoid rule with the given step.
EnsembleResult accumulate(const InjectionSpec& spec, const ComplexMatrix& hamiltonian,
                          const std::vector<double>& population_decay,
                          const std::vector<double>& times, double quad_step,
                          const Tolerances& tols = default_tolerances());

/// Max elementwise residual of d/dt rho~ = Lambda + L rho~ at the interior
/// times of `result`, using centered differences. The model must use the
/// decay-out class with gamma_nm = (Gamma_n + Gamma_m)/2 exactly; anything
/// else throws UnsupportedRelaxationError.
double verify_master_equation(const EnsembleResult& result, const ModelSpec& model,
                              const Tolerances& tols = default_tolerances());

/// Injection spec whose pump term reproduces the given pump matrix; states
/// are the pump's eigenvectors, the rate is Tr Lambda.
InjectionSpec injection_from_pump(const PumpMatrix& pump,
                                  const Tolerances& tols = default_tolerances());

}  // namespace pumped
