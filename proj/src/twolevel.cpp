#include "pumped/twolevel.hpp"

#include <cmath>
#include <string>

#include "pumped/errors.hpp"

namespace pumped {

void TwoLevelParams::validate(const Tolerances& tols) const {
    std::vector<std::string> failures;
    auto nonneg = [&](double x, const char* name) {
        if (!(x >= 0.0) || !std::isfinite(x)) failures.push_back(std::string(name) + " must be >= 0");
    };
    nonneg(pump_1, "pump_1");
    nonneg(pump_2, "pump_2");
    nonneg(decay_1, "decay_1");
    nonneg(decay_2, "decay_2");
    nonneg(coherence_decay, "coherence_decay");
    if (!std::isfinite(detuning) || !std::isfinite(coupling))
        failures.push_back("detuning and coupling must be finite");
    if (coherence_decay < 0.5 * (decay_1 + decay_2) - tols.hermiticity_strict)
        failures.push_back("coherence_decay must be at least (decay_1 + decay_2)/2");
    if (std::norm(pump_21) > pump_1 * pump_2 + tols.pump_psd)
        failures.push_back("|pump_21|^2 must not exceed pump_1 * pump_2");
    if (!failures.empty()) throw ValidationError("invalid two-level parameters", failures);
}

ModelSpec to_model(const TwoLevelParams& p, const Tolerances& tols) {
    p.validate(tols);
    ModelSpec model;
    model.n = 2;
    // rotating-frame Hamiltonian reproducing the standard-layout generator
    model.hamiltonian = ComplexMatrix{{0.0, -p.coupling}, {-p.coupling, -p.detuning}};
    DecayClassRelaxation decay;
    decay.population_decay = {p.decay_1, p.decay_2};
    decay.coherence_decay = {0.0, p.coherence_decay, p.coherence_decay, 0.0};
    model.relaxation = decay;
    model.pump = ComplexMatrix{{p.pump_1, std::conj(p.pump_21)}, {p.pump_21, p.pump_2}};
    return model;
}

ComplexVector to_excited_first(const ComplexVector& canonical) {
    if (canonical.size() != 4)
        throw DimensionError("layout adapter expects a length-4 vector");
    ComplexVector out(4);
    for (std::size_t i = 0; i < 4; ++i) out[i] = canonical[3 - i];
    return out;
}

ComplexMatrix to_excited_first(const ComplexMatrix& canonical_4x4) {
    if (canonical_4x4.rows() != 4 || canonical_4x4.cols() != 4)
        throw DimensionError("layout adapter expects a 4x4 matrix");
    ComplexMatrix out(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out(i, j) = canonical_4x4(3 - i, 3 - j);
    return out;
}

double analytic_population_difference(const TwoLevelParams& p) {
    if (!(p.decay_1 > 0.0) || !(p.decay_2 > 0.0))
        throw DomainError(
            "population-difference formula needs Gamma_1 > 0 and Gamma_2 > 0; use the "
            "steady-state linear solve instead");
    const double eta2 = eta_squared(p);
    const double v2 = p.coupling * p.coupling;
    const double lorentz =
        1.0 - eta2 * v2 / (p.detuning * p.detuning + p.coherence_decay * p.coherence_decay +
                           eta2 * v2);
    return (p.pump_2 / p.decay_2 - p.pump_1 / p.decay_1) * lorentz;
}

double eta_squared(const TwoLevelParams& p) {
    if (!(p.decay_1 > 0.0) || !(p.decay_2 > 0.0))
        throw DomainError("eta^2 needs Gamma_1 > 0 and Gamma_2 > 0");
    return 2.0 * p.coherence_decay * (p.decay_1 + p.decay_2) / (p.decay_1 * p.decay_2);
}

double gamma2_zero_limit_difference(const TwoLevelParams& p) {
    if (p.decay_2 != 0.0) throw DomainError("limit formula applies only to Gamma_2 = 0");
    if (!(p.decay_1 > 0.0) || !(p.coherence_decay > 0.0))
        throw DomainError("limit formula needs Gamma_1 > 0 and gamma > 0");
    if (p.coupling == 0.0) {
        if (p.pump_2 > 0.0)
            throw UnboundedGrowthError(
                "level 2 is pumped but has no exit channel (V = 0, Gamma_2 = 0)");
        return 0.0;
    }
    return p.pump_2 * (p.detuning * p.detuning + p.coherence_decay * p.coherence_decay) /
           (2.0 * p.coherence_decay * p.coupling * p.coupling);
}

ReferenceFixture reference_fixture(int case_id) {
    const Complex i(0.0, 1.0);
    switch (case_id) {
        case 1: {
            TwoLevelParams p;
            p.pump_1 = 0.0;
            p.pump_2 = 1.0;
            p.decay_2 = 0.0;
            p.decay_1 = 1.0;
            p.coherence_decay = 0.5;
            p.detuning = 0.0;
            p.coupling = 2.0;
            return {1,
                    p,
                    {Complex(1.0625), -0.25 * i, 0.25 * i, Complex(1.0)},
                    {-0.5 - 3.9686 * i, -0.5 + 3.9686 * i, Complex(-0.5), Complex(-0.5)}};
        }
        case 2: {
            TwoLevelParams p;
            p.pump_1 = 0.0;
            p.pump_2 = 1.0;
            p.decay_2 = 0.0;
            p.decay_1 = 1.0;
            p.coherence_decay = 0.5;
            p.detuning = -1.0;
            p.coupling = 2.0;
            return {2,
                    p,
                    {Complex(1.3125), -0.5 - 0.25 * i, -0.5 + 0.25 * i, Complex(1.0)},
                    {-0.5 - 4.0945 * i, -0.5 + 4.0945 * i, Complex(-0.6221), Complex(-0.3779)}};
        }
        case 3: {
            TwoLevelParams p;
            p.pump_1 = 1.0;
            p.pump_2 = 1.0;
            p.decay_2 = 1.0;
            p.decay_1 = 1.0;
            p.coherence_decay = 1.0;
            p.detuning = 1.0;
            p.coupling = 5.0;
            return {3,
                    p,
                    {Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)},
                    {-1.0 - 10.0499 * i, -1.0 + 10.0499 * i, Complex(-1.0), Complex(-1.0)}};
        }
        case 4: {
            TwoLevelParams p;
            p.pump_1 = 1.0;
            p.pump_2 = 1.0;
            p.decay_2 = 1.0;
            p.decay_1 = 1.0;
            p.coherence_decay = 1.0;
            p.detuning = 5.0;
            p.coupling = 5.0;
            return {4,
                    p,
                    {Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)},
                    {-1.0 - 11.1803 * i, -1.0 + 11.1803 * i, Complex(-1.0), Complex(-1.0)}};
        }
        default:
            throw DomainError("fixture case id must be 1..4, got " + std::to_string(case_id));
    }
}

}  // namespace pumped
