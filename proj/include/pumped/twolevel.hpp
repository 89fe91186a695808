#pragma once

#include <array>

#include "pumped/linalg.hpp"
#include "pumped/model.hpp"
#include "pumped/tolerances.hpp"

namespace pumped {

/// Driven two-level system with pumping and decay out of both levels.
struct TwoLevelParams {
    double pump_1 = 0.0;        // Lambda_1
    double pump_2 = 0.0;        // Lambda_2
    Complex pump_21 = 0.0;      // Lambda_21, off-diagonal pump (usually 0)
    double decay_1 = 0.0;       // Gamma_1
    double decay_2 = 0.0;       // Gamma_2
    double coherence_decay = 0.0;  // gamma >= (Gamma_1 + Gamma_2) / 2
    double detuning = 0.0;      // omega
    double coupling = 0.0;      // V, Rabi-type coupling

    void validate(const Tolerances& tols = default_tolerances()) const;
};

/// Build the general model for these parameters. The canonical-order
/// superoperator, permuted to the (rho22, rho21, rho12, rho11) layout, is
///
///   [ -Gamma_2      -iV          iV        0     ]
///   [   -iV     i omega-gamma    0         iV    ]
///   [    iV          0     -(i omega+gamma) -iV  ]
///   [     0          iV         -iV      -Gamma_1]
ModelSpec to_model(const TwoLevelParams& p, const Tolerances& tols = default_tolerances());

/// Reorder a canonical length-4 vector (rho11, rho12, rho21, rho22) into the
/// two-level literature layout (rho22, rho21, rho12, rho11), or back (the
/// permutation is an involution).
ComplexVector to_excited_first(const ComplexVector& canonical);
ComplexMatrix to_excited_first(const ComplexMatrix& canonical_4x4);

/// Asymptotic population difference rho22 - rho11 of the steady state,
///   (Lambda_2/Gamma_2 - Lambda_1/Gamma_1) (1 - eta^2 V^2 / (omega^2 + gamma^2 + eta^2 V^2)).
/// Requires Gamma_1 > 0 and Gamma_2 > 0.
double analytic_population_difference(const TwoLevelParams& p);

/// eta^2 = 2 gamma (Gamma_1 + Gamma_2) / (Gamma_1 Gamma_2) >= 4.
double eta_squared(const TwoLevelParams& p);

/// Closed form of the population difference in the Gamma_2 = 0 limit:
/// Lambda_2 (omega^2 + gamma^2) / (2 gamma V^2). Requires V != 0; with
/// V = 0 and Lambda_2 > 0 the upper level has no exit channel.
double gamma2_zero_limit_difference(const TwoLevelParams& p);

/// One of the four bundled regression cases: exact parameters, steady state
/// and eigenvalues as tabulated, states in the (rho22, rho21, rho12, rho11)
/// layout.
struct ReferenceFixture {
    int case_id;
    TwoLevelParams params;
    std::array<Complex, 4> steady_state_excited_first;
    std::array<Complex, 4> eigenvalues;
};

/// Fixture cases 1..4; anything else throws DomainError.
ReferenceFixture reference_fixture(int case_id);

}  // namespace pumped
