#include "pumped/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pumped/errors.hpp"

namespace pumped {

namespace {

std::string fmt_complex(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

double SpectralDecomposition::biorthonormality_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) {
            const Complex g = inner(left_vectors[i], right_vectors[j]);
            const Complex expect = (i == j) ? Complex(1.0) : Complex(0.0);
            worst = std::max(worst, std::abs(g - expect));
        }
    return worst;
}

double SpectralDecomposition::completeness_residual() const {
    const std::size_t dim = right_vectors.empty() ? 0 : right_vectors.front().size();
    ComplexMatrix sum(dim, dim);
    for (std::size_t nu = 0; nu < size(); ++nu) sum += outer(right_vectors[nu], left_vectors[nu]);
    sum -= ComplexMatrix::identity(dim);
    return sum.max_abs();
}

std::vector<std::pair<std::size_t, std::size_t>> SpectralDecomposition::conjugate_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const double tol = cluster_tolerance;
    std::vector<bool> used(size(), false);
    for (std::size_t i = 0; i < size(); ++i) {
        if (used[i] || std::abs(eigenvalues[i].imag()) <= tol) continue;
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (used[j]) continue;
            if (std::abs(eigenvalues[j] - std::conj(eigenvalues[i])) <= tol) {
                pairs.emplace_back(i, j);
                used[i] = used[j] = true;
                break;
            }
        }
    }
    return pairs;
}

SpectralDecomposition decompose(const ComplexMatrix& l, double cluster_tol,
                                const Tolerances& tols) {
    if (!l.is_square()) throw DimensionError("decompose expects a square generator");
    const std::size_t n = l.rows();
    const double scale = std::max(l.frobenius_norm(), std::numeric_limits<double>::min());
    if (cluster_tol <= 0.0) cluster_tol = tols.cluster_rel * scale;

    std::vector<Eigenpair> right = eig_general(l, tols);
    std::vector<Eigenpair> left_raw = eig_general(l.adjoint(), tols);

    // reject non-decaying modes before anything else
    for (const Eigenpair& p : right)
        if (p.value.real() >= -tols.non_decaying)
            throw NonDecayingModeError(
                "non-decaying mode: eigenvalue " + fmt_complex(p.value) +
                    " has nonnegative real part (trapped or pumped-without-exit subspace)",
                p.value);

    // match left eigenvalues (conjugated) to the right eigenvalues
    SpectralDecomposition dec;
    dec.cluster_tolerance = cluster_tol;
    dec.eigenvalues.reserve(n);
    dec.right_vectors.reserve(n);
    dec.left_vectors.reserve(n);

    std::vector<bool> used(n, false);
    for (const Eigenpair& p : right) {
        std::size_t best = n;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(std::conj(left_raw[j].value) - p.value);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best == n || best_dist > cluster_tol)
            throw DefectiveMatrixError(
                "left/right eigenvalue sets do not match within the cluster tolerance near " +
                fmt_complex(p.value));
        used[best] = true;
        dec.eigenvalues.push_back(p.value);
        dec.right_vectors.push_back(p.vector);
        dec.left_vectors.push_back(left_raw[best].vector);
    }

    // biorthonormalize cluster by cluster: left vectors are re-mixed by the
    // inverse of the cluster Gram matrix G_ij = <<y_i|x_j>>. Clusters are
    // value-proximity groups; degenerate eigenvalues need not be adjacent in
    // the sorted order.
    for (const std::vector<std::size_t>& cluster :
         cluster_indices(dec.eigenvalues, cluster_tol)) {
        const std::size_t k = cluster.size();
        ComplexMatrix gram(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                gram(i, j) =
                    inner(dec.left_vectors[cluster[i]], dec.right_vectors[cluster[j]]);

        ComplexMatrix z;  // z = gram^-1
        try {
            Tolerances lu_tols = tols;
            lu_tols.singular_rel = tols.gram_singular;
            z = inverse(gram, lu_tols);
        } catch (const SingularMatrixError&) {
            throw DefectiveMatrixError(
                "defective generator: cluster Gram matrix singular near eigenvalue " +
                fmt_complex(dec.eigenvalues[cluster.front()]));
        }

        std::vector<ComplexVector> mixed(k);
        for (std::size_t i = 0; i < k; ++i) {
            ComplexVector y(dec.left_vectors[cluster.front()].size());
            for (std::size_t j = 0; j < k; ++j)
                y += std::conj(z(i, j)) * dec.left_vectors[cluster[j]];
            mixed[i] = std::move(y);
        }
        for (std::size_t i = 0; i < k; ++i) dec.left_vectors[cluster[i]] = std::move(mixed[i]);
    }

    const double bio = dec.biorthonormality_residual();
    if (bio > tols.biorthonormality)
        throw DefectiveMatrixError("biorthonormality residual " + std::to_string(bio) +
                                   " exceeds tolerance; eigenbasis numerically incomplete");
    const double comp = dec.completeness_residual();
    if (comp > tols.completeness)
        throw DefectiveMatrixError("completeness residual " + std::to_string(comp) +
                                   " exceeds tolerance; eigenbasis numerically incomplete");
    return dec;
}

SpectralDecomposition decompose(const Superoperator& l, double cluster_tol,
                                const Tolerances& tols) {
    return decompose(l.matrix, cluster_tol, tols);
}

MetricOperator build_metric(const SpectralDecomposition& dec, const Tolerances& tols) {
    if (dec.size() == 0) throw DimensionError("build_metric: empty decomposition");
    const std::size_t dim = dec.right_vectors.front().size();

    MetricOperator m;
    m.omega = ComplexMatrix(dim, dim);
    m.omega_inverse = ComplexMatrix(dim, dim);
    for (std::size_t nu = 0; nu < dec.size(); ++nu) {
        m.omega += outer(dec.left_vectors[nu], dec.left_vectors[nu]);
        m.omega_inverse += outer(dec.right_vectors[nu], dec.right_vectors[nu]);
    }

    if (m.omega.hermiticity_defect() > tols.metric_hermitian ||
        m.omega_inverse.hermiticity_defect() > tols.metric_hermitian)
        throw MetricCorruptionError("metric operator lost Hermiticity");
    if (!is_positive_definite(m.omega) || !is_positive_definite(m.omega_inverse))
        throw MetricCorruptionError("metric operator is not positive definite");

    ComplexMatrix prod = m.omega * m.omega_inverse;
    prod -= ComplexMatrix::identity(dim);
    if (prod.max_abs() > tols.metric_product)
        throw MetricCorruptionError("Omega Omega^-1 deviates from the identity by " +
                                    std::to_string(prod.max_abs()));

    // <<x_nu| Omega |x_mu>> = delta: the right vectors are orthonormal in the
    // new metric
    double worst = 0.0;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const ComplexVector wi = m.omega * dec.right_vectors[i];
        for (std::size_t j = 0; j < dec.size(); ++j) {
            const Complex g = inner(dec.right_vectors[j], wi);
            const Complex expect = (i == j) ? Complex(1.0) : Complex(0.0);
            worst = std::max(worst, std::abs(g - expect));
        }
    }
    if (worst > tols.biorthonormality)
        throw MetricCorruptionError("metric orthonormality of right vectors off by " +
                                    std::to_string(worst));
    return m;
}

namespace {

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b, double scale) {
    ComplexMatrix d = a;
    d -= b;
    return d.frobenius_norm() / scale;
}

}  // namespace

SimilarityResidual verify_similarity(const ComplexMatrix& l, const SpectralDecomposition& dec,
                                     const MetricOperator& m) {
    if (l.rows() != m.omega.rows())
        throw DimensionError("verify_similarity: dimension mismatch");
    const std::size_t dim = l.rows();
    const double norm_l = std::max(l.frobenius_norm(), std::numeric_limits<double>::min());
    const double norm_omega = std::max(m.omega.frobenius_norm(), 1.0);
    const double norm_omega_inv = std::max(m.omega_inverse.frobenius_norm(), 1.0);

    // L* conjugates the c-numbers of the spectral representation only:
    // L* = sum x conj(lambda) y^+, so L*^+ = sum y lambda x^+.
    ComplexMatrix l_star(dim, dim);
    for (std::size_t nu = 0; nu < dec.size(); ++nu) {
        ComplexMatrix term = outer(dec.right_vectors[nu], dec.left_vectors[nu]);
        term *= std::conj(dec.eigenvalues[nu]);
        l_star += term;
    }
    const ComplexMatrix l_star_adj = l_star.adjoint();
    const ComplexMatrix l_adj = l.adjoint();

    SimilarityResidual out{};
    out.similarity = rel_diff(m.omega * l * m.omega_inverse, l_star_adj, norm_l);

    // the four rearrangements: Omega L = L*^+ Omega,  L Omega^-1 = Omega^-1 L*^+,
    // Omega L* = L^+ Omega,  L* Omega^-1 = Omega^-1 L^+
    out.bundle_max = std::max(
        {rel_diff(m.omega * l, l_star_adj * m.omega, norm_l * norm_omega),
         rel_diff(l * m.omega_inverse, m.omega_inverse * l_star_adj, norm_l * norm_omega_inv),
         rel_diff(m.omega * l_star, l_adj * m.omega, norm_l * norm_omega),
         rel_diff(l_star * m.omega_inverse, m.omega_inverse * l_adj, norm_l * norm_omega_inv)});
    return out;
}

SimilarityResidual verify_similarity(const Superoperator& l, const SpectralDecomposition& dec,
                                     const MetricOperator& m) {
    return verify_similarity(l.matrix, dec, m);
}

double conjugate_pair_orthogonality(const SpectralDecomposition& dec, const MetricOperator& m) {
    double worst = 0.0;
    for (const auto& [mu, mu_star] : dec.conjugate_pairs()) {
        const Complex g = inner(dec.right_vectors[mu], m.omega * dec.right_vectors[mu_star]);
        worst = std::max(worst, std::abs(g));
    }
    return worst;
}

ComplexMatrix reconstruct(const SpectralDecomposition& dec) {
    if (dec.size() == 0) throw DimensionError("reconstruct: empty decomposition");
    const std::size_t dim = dec.right_vectors.front().size();
    ComplexMatrix l(dim, dim);
    for (std::size_t nu = 0; nu < dec.size(); ++nu) {
        ComplexMatrix term = outer(dec.right_vectors[nu], dec.left_vectors[nu]);
        term *= dec.eigenvalues[nu];
        l += term;
    }
    return l;
}

}  // namespace pumped
