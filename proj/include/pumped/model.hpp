#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pumped/linalg.hpp"
#include "pumped/tolerances.hpp"

namespace pumped {

/// N x N complex matrix whose diagonal holds level populations. Physical
/// states are Hermitian; the trace is NOT conserved by pumped evolution.
using DensityMatrix = ComplexMatrix;

/// Hermitian positive-semidefinite source term, units 1/time.
using PumpMatrix = ComplexMatrix;

/// Decay shorthand: population decay out of the system plus pure coherence
/// decay,  d/dt rho_nn += -Gamma_n rho_nn,  d/dt rho_nm += -gamma_nm rho_nm.
struct DecayClassRelaxation {
    std::vector<double> population_decay;  // Gamma_n, length n
    /// symmetric n x n coherence decay table, diagonal ignored
    std::vector<double> coherence_decay;

    double gamma(std::size_t n, std::size_t m, std::size_t dim) const {
        return coherence_decay[n * dim + m];
    }
};

/// Expert mode: the full N^2 x N^2 relaxation superoperator.
struct ExplicitRelaxation {
    ComplexMatrix matrix;
};

using RelaxationSpec = std::variant<DecayClassRelaxation, ExplicitRelaxation>;

struct ModelSpec {
    std::size_t n = 0;
    ComplexMatrix hamiltonian;  // Hermitian, units 1/time (hbar = 1)
    RelaxationSpec relaxation;
    PumpMatrix pump;
};

/// Generator of the vectorized evolution  d/dt rho = Lambda + L rho.
struct Superoperator {
    std::size_t levels = 0;
    ComplexMatrix matrix;  // N^2 x N^2
};

struct ValidationReport {
    struct Item {
        std::string name;
        bool passed;
        std::string detail;
    };
    std::vector<Item> items;

    bool all_passed() const;
    std::vector<std::string> failures() const;
    std::string summary() const;
};

/// Physical-constraint report: pump PSD with nonnegative diagonal, coherence
/// decay at least the lifetime average, Hermitian Hamiltonian. Never throws;
/// the result lists pass/fail per constraint.
ValidationReport validate(const ModelSpec& model, const Tolerances& tols = default_tolerances());

/// Assemble L = -i[H, .] + R in the canonical vectorization. Throws
/// ValidationError listing every failed constraint when the model is invalid.
Superoperator build_superoperator(const ModelSpec& model,
                                  const Tolerances& tols = default_tolerances());

/// Apply only the relaxation part of the model to a state.
DensityMatrix apply_relaxation(const ModelSpec& model, const DensityMatrix& rho);

/// |Tr(R rho0) + Tr Lambda|; vanishes for a steady state since the
/// commutator part is trace-free.
double probability_balance(const ModelSpec& model, const DensityMatrix& rho0);

}  // namespace pumped
