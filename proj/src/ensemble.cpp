#include "pumped/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pumped/errors.hpp"

namespace pumped {

void InjectionSpec::validate(const Tolerances& tols) const {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw ValidationError("injection rate must be finite and nonnegative", {"rate"});
    if (states.empty()) throw ValidationError("injection spec has no states", {"states"});
    double total = 0.0;
    for (const State& s : states) {
        if (!(s.weight >= 0.0))
            throw ValidationError("injection weights must be nonnegative", {"weight"});
        total += s.weight;
        if (std::abs(s.amplitudes.norm() - 1.0) > tols.amplitude_normalization)
            throw ValidationError("injected amplitude vectors must be normalized",
                                  {"amplitude norm " + std::to_string(s.amplitudes.norm())});
    }
    if (std::abs(total - 1.0) > tols.weight_normalization)
        throw ValidationError("injection weights must sum to 1",
                              {"sum = " + std::to_string(total)});
}

SingleSystemPropagator::SingleSystemPropagator(const ComplexMatrix& hamiltonian,
                                               const std::vector<double>& population_decay,
                                               const Tolerances& tols)
    : dim_(hamiltonian.rows()) {
    if (!hamiltonian.is_square()) throw DimensionError("propagator expects a square Hamiltonian");
    if (population_decay.size() != dim_)
        throw DimensionError("propagator: decay list does not match the Hamiltonian");

    // generator of the amplitude evolution: A = -i H - diag(Gamma) / 2
    ComplexMatrix a(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) a(i, j) = Complex(0.0, -1.0) * hamiltonian(i, j);
    for (std::size_t i = 0; i < dim_; ++i) a(i, i) -= 0.5 * population_decay[i];

    std::vector<Eigenpair> pairs = eig_general(a, tols);
    ComplexMatrix basis(dim_, dim_);
    double max_re = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dim_; ++k) {
        eigenvalues_.push_back(pairs[k].value);
        eigenvectors_.push_back(pairs[k].vector);
        for (std::size_t i = 0; i < dim_; ++i) basis(i, k) = pairs[k].vector[i];
        max_re = std::max(max_re, pairs[k].value.real());
    }
    try {
        basis_inverse_ = inverse(basis, tols);
    } catch (const SingularMatrixError&) {
        throw DefectiveMatrixError("effective Hamiltonian has no complete eigenbasis");
    }
    slowest_decay_rate_ = -2.0 * max_re;  // |c|^2 decays at twice the amplitude rate
}

ComplexVector SingleSystemPropagator::evolve(const ComplexVector& c0, double tau) const {
    if (c0.size() != dim_) throw DimensionError("evolve: amplitude dimension mismatch");
    const ComplexVector coeffs = basis_inverse_ * c0;
    ComplexVector c(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        const Complex amp = coeffs[k] * std::exp(eigenvalues_[k] * tau);
        c += amp * eigenvectors_[k];
    }
    return c;
}

ComplexVector evolve_single(const ComplexMatrix& hamiltonian,
                            const std::vector<double>& population_decay,
                            const ComplexVector& c0, double tau, const Tolerances& tols) {
    if (!(tau >= 0.0)) throw DomainError("evolve_single: tau must be nonnegative");
    return SingleSystemPropagator(hamiltonian, population_decay, tols).evolve(c0, tau);
}

EnsembleResult accumulate(const InjectionSpec& spec, const ComplexMatrix& hamiltonian,
                          const std::vector<double>& population_decay,
                          const std::vector<double>& times, double quad_step,
                          const Tolerances& tols) {
    spec.validate(tols);
    if (!(quad_step > 0.0)) throw DomainError("accumulate: quadrature step must be positive");
    if (times.empty()) throw DomainError("accumulate: empty time grid");

    const SingleSystemPropagator prop(hamiltonian, population_decay, tols);
    const std::size_t n = prop.dim();

    double start;
    if (spec.start_time) {
        start = *spec.start_time;
    } else {
        const double rate = prop.slowest_decay_rate();
        if (!(rate > 0.0))
            throw DomainError(
                "cannot approximate injection since -infinity: the slowest mode does not decay");
        // window long enough that the earliest trajectory has |c|^2 <= 1e-12
        start = times.front() - std::log(1e12) / rate;
    }

    EnsembleResult result;
    result.times = times;
    result.quadrature_step = quad_step;
    result.states.reserve(times.size());

    for (double t : times) {
        const double window = t - start;
        ComplexMatrix rho(n, n);
        if (window > 0.0 && spec.rate > 0.0) {
            const std::size_t intervals =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window / quad_step)));
            const double h = window / static_cast<double>(intervals);
            for (const InjectionSpec::State& psi : spec.states) {
                if (psi.weight == 0.0) continue;
                ComplexMatrix contrib(n, n);
                for (std::size_t k = 0; k <= intervals; ++k) {
                    const double tau = h * static_cast<double>(k);
                    const ComplexVector c = prop.evolve(psi.amplitudes, tau);
                    const double w = (k == 0 || k == intervals) ? 0.5 * h : h;
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            contrib(i, j) += w * c[i] * std::conj(c[j]);
                }
                contrib *= spec.rate * psi.weight;
                rho += contrib;
            }
        }
        result.states.push_back(std::move(rho));
    }
    return result;
}

double verify_master_equation(const EnsembleResult& result, const ModelSpec& model,
                              const Tolerances& tols) {
    const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation);
    if (!decay)
        throw UnsupportedRelaxationError(
            "ensemble verification requires the decay-class relaxation shorthand");
    for (std::size_t i = 0; i < model.n; ++i)
        for (std::size_t j = i + 1; j < model.n; ++j) {
            const double expected =
                0.5 * (decay->population_decay[i] + decay->population_decay[j]);
            if (std::abs(decay->gamma(i, j, model.n) - expected) > tols.hermiticity_strict)
                throw UnsupportedRelaxationError(
                    "coherence decay gamma_" + std::to_string(i + 1) + std::to_string(j + 1) +
                    " = " + std::to_string(decay->gamma(i, j, model.n)) +
                    " is not the lifetime average (Gamma_" + std::to_string(i + 1) + "+Gamma_" +
                    std::to_string(j + 1) + ")/2 = " + std::to_string(expected) +
                    "; a single damped trajectory cannot represent extra dephasing");
        }

    if (result.times.size() < 3)
        throw DomainError("verify_master_equation needs at least three times");
    const double step = result.times[1] - result.times[0];
    for (std::size_t k = 0; k + 1 < result.times.size(); ++k)
        if (std::abs((result.times[k + 1] - result.times[k]) - step) > 1e-12 * std::max(step, 1.0))
            throw DomainError("verify_master_equation needs a uniform time grid");

    const Superoperator l = build_superoperator(model, tols);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < result.times.size(); ++k) {
        DensityMatrix derivative = result.states[k + 1];
        derivative -= result.states[k - 1];
        derivative *= 1.0 / (2.0 * step);

        DensityMatrix rhs =
            unvectorize(l.matrix * vectorize(result.states[k]), model.n);
        rhs += model.pump;

        derivative -= rhs;
        worst = std::max(worst, derivative.max_abs());
    }
    return worst;
}

InjectionSpec injection_from_pump(const PumpMatrix& pump, const Tolerances& tols) {
    if (!pump.is_square()) throw DimensionError("injection_from_pump expects a square pump");
    if (pump.hermiticity_defect() > tols.pump_psd)
        throw ValidationError("pump must be Hermitian", {"hermiticity"});
    const std::size_t n = pump.rows();

    InjectionSpec spec;
    const double total = pump.trace().real();
    if (total <= tols.pump_psd * static_cast<double>(n)) {
        // no pumping: a dummy unit state with zero rate
        ComplexVector e(n);
        e[0] = 1.0;
        spec.states.push_back({e, 1.0});
        spec.rate = 0.0;
        return spec;
    }

    for (const Eigenpair& p : eig_general(pump, tols)) {
        const double weight = p.value.real();
        if (weight < -tols.pump_psd)
            throw ValidationError("pump must be positive semidefinite",
                                  {"eigenvalue " + std::to_string(weight)});
        if (weight <= tols.pump_psd) continue;
        spec.states.push_back({p.vector, weight / total});
    }
    spec.rate = total;
    return spec;
}

}  // namespace pumped
