#include "pumped/model.hpp"

#include <cmath>
#include <sstream>

#include "pumped/errors.hpp"

namespace pumped {

bool ValidationReport::all_passed() const {
    for (const Item& item : items)
        if (!item.passed) return false;
    return true;
}

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const Item& item : items)
        if (!item.passed) out.push_back(item.name + ": " + item.detail);
    return out;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const Item& item : items)
        os << (item.passed ? "pass" : "FAIL") << "  " << item.name
           << (item.detail.empty() ? "" : "  (" + item.detail + ")") << "\n";
    return os.str();
}

namespace {

bool shapes_consistent(const ModelSpec& model, std::string& why) {
    const std::size_t n = model.n;
    if (n == 0) {
        why = "level count is zero";
        return false;
    }
    if (model.hamiltonian.rows() != n || model.hamiltonian.cols() != n) {
        why = "hamiltonian is not " + std::to_string(n) + "x" + std::to_string(n);
        return false;
    }
    if (model.pump.rows() != n || model.pump.cols() != n) {
        why = "pump is not " + std::to_string(n) + "x" + std::to_string(n);
        return false;
    }
    if (const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation)) {
        if (decay->population_decay.size() != n || decay->coherence_decay.size() != n * n) {
            why = "decay table sizes do not match the level count";
            return false;
        }
    } else {
        const auto& r = std::get<ExplicitRelaxation>(model.relaxation).matrix;
        if (r.rows() != n * n || r.cols() != n * n) {
            why = "explicit relaxation is not N^2 x N^2";
            return false;
        }
    }
    return true;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

ValidationReport validate(const ModelSpec& model, const Tolerances& tols) {
    ValidationReport report;
    std::string why;
    if (!shapes_consistent(model, why)) {
        report.items.push_back({"shapes", false, why});
        return report;
    }
    const std::size_t n = model.n;

    // Hamiltonian: Hermitian, finite
    {
        const double defect = model.hamiltonian.hermiticity_defect();
        const bool ok = model.hamiltonian.is_finite() && defect <= tols.hermiticity_strict;
        report.items.push_back({"hamiltonian hermitian", ok,
                                ok ? "" : "max |H - H^+| = " + fmt(defect)});
    }

    // Pump: Hermitian, PSD, nonnegative diagonal
    {
        bool ok = model.pump.is_finite();
        std::string detail;
        if (!ok) {
            detail = "non-finite entries";
        } else if (model.pump.hermiticity_defect() > tols.pump_psd) {
            ok = false;
            detail = "not Hermitian, max |L - L^+| = " + fmt(model.pump.hermiticity_defect());
        } else {
            double min_diag = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                min_diag = std::min(min_diag, model.pump(i, i).real());
            if (min_diag < -tols.pump_psd) {
                ok = false;
                detail = "negative pump diagonal " + fmt(min_diag);
            } else {
                double min_eig = 0.0;
                for (const Eigenpair& p : eig_general(model.pump, tols))
                    min_eig = std::min(min_eig, p.value.real());
                if (min_eig < -tols.pump_psd) {
                    ok = false;
                    detail = "smallest pump eigenvalue " + fmt(min_eig);
                }
            }
        }
        report.items.push_back({"pump positive semidefinite", ok, detail});
    }

    // Decay rates: nonnegative, symmetric, gamma_nm >= (Gamma_n + Gamma_m) / 2
    if (const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation)) {
        bool ok = true;
        std::string detail;
        for (double g : decay->population_decay)
            if (!(g >= 0.0) || !std::isfinite(g)) {
                ok = false;
                detail = "negative or non-finite population decay";
            }
        for (std::size_t i = 0; ok && i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double gij = decay->gamma(i, j, n);
                if (std::abs(gij - decay->gamma(j, i, n)) > tols.hermiticity_strict) {
                    ok = false;
                    detail = "coherence decay table not symmetric";
                    break;
                }
                const double bound =
                    0.5 * (decay->population_decay[i] + decay->population_decay[j]);
                if (gij < bound - tols.hermiticity_strict) {
                    ok = false;
                    detail = "gamma_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " +
                             fmt(gij) + " below (Gamma_" + std::to_string(i + 1) + "+Gamma_" +
                             std::to_string(j + 1) + ")/2 = " + fmt(bound);
                    break;
                }
            }
        report.items.push_back({"coherence decay bound", ok, detail});
    } else {
        const auto& r = std::get<ExplicitRelaxation>(model.relaxation).matrix;
        report.items.push_back({"coherence decay bound", r.is_finite(),
                                r.is_finite() ? "not applicable to explicit relaxation"
                                              : "non-finite entries"});
    }

    return report;
}

Superoperator build_superoperator(const ModelSpec& model, const Tolerances& tols) {
    const ValidationReport report = validate(model, tols);
    if (!report.all_passed())
        throw ValidationError("model validation failed", report.failures());

    const std::size_t n = model.n;
    ComplexMatrix l(n * n, n * n);

    // commutator part: -i (H (x) I - I (x) H^T) on row-major vec
    const Complex minus_i(0.0, -1.0);
    const ComplexMatrix& h = model.hamiltonian;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                // H rho: row (i,k) <- H(i,j) rho(j,k)
                l(i * n + k, j * n + k) += minus_i * h(i, j);
                // rho H: row (i,k) <- rho(i,j) H(j,k)
                l(i * n + k, i * n + j) -= minus_i * h(j, k);
            }

    if (const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double rate =
                    (i == j) ? decay->population_decay[i] : decay->gamma(i, j, n);
                l(i * n + j, i * n + j) -= rate;
            }
    } else {
        l += std::get<ExplicitRelaxation>(model.relaxation).matrix;
    }

    return Superoperator{n, std::move(l)};
}

DensityMatrix apply_relaxation(const ModelSpec& model, const DensityMatrix& rho) {
    const std::size_t n = model.n;
    if (rho.rows() != n || rho.cols() != n)
        throw DimensionError("apply_relaxation: state dimension mismatch");

    if (const auto* decay = std::get_if<DecayClassRelaxation>(&model.relaxation)) {
        DensityMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double rate =
                    (i == j) ? decay->population_decay[i] : decay->gamma(i, j, n);
                out(i, j) = -rate * rho(i, j);
            }
        return out;
    }
    const auto& r = std::get<ExplicitRelaxation>(model.relaxation).matrix;
    return unvectorize(r * vectorize(rho), n);
}

double probability_balance(const ModelSpec& model, const DensityMatrix& rho0) {
    return std::abs(apply_relaxation(model, rho0).trace() + model.pump.trace());
}

}  // namespace pumped
