#pragma once

#include <vector>

#include "pumped/linalg.hpp"
#include "pumped/model.hpp"
#include "pumped/tolerances.hpp"

namespace pumped {

/// Biorthogonal eigensystem of a generator L: right vectors L x = lambda x,
/// left vectors L^+ y = conj(lambda) y, normalized so <<y_nu|x_mu>> = delta.
struct SpectralDecomposition {
    std::vector<Complex> eigenvalues;
    std::vector<ComplexVector> right_vectors;
    std::vector<ComplexVector> left_vectors;
    double cluster_tolerance = 0.0;

    std::size_t size() const { return eigenvalues.size(); }

    /// max over (nu, mu) of |<<y_nu|x_mu>> - delta_nu_mu|
    double biorthonormality_residual() const;
    /// max entry of | sum_nu |x_nu><y_nu| - I |
    double completeness_residual() const;
    /// index pairs (mu, mu*) with lambda_mu* = conj(lambda_mu), Im != 0
    std::vector<std::pair<std::size_t, std::size_t>> conjugate_pairs() const;
};

/// Positive Hermitian metric Omega = sum |y><y| with its inverse sum |x><x|.
struct MetricOperator {
    ComplexMatrix omega;
    ComplexMatrix omega_inverse;
};

/// Decompose L into its biorthogonal eigensystem. Eigenvalues within
/// cluster_tol of each other form one degenerate cluster whose left vectors
/// are re-mixed through the inverse of the cluster Gram matrix. Passing
/// cluster_tol <= 0 selects the default cluster_rel * ||L||_F.
///
/// Throws DefectiveMatrixError when a cluster Gram matrix is singular (no
/// complete eigenbasis) and NonDecayingModeError when any Re(lambda) >= 0:
/// such a mode signals a trapped subspace, which pumped evolution excludes.
SpectralDecomposition decompose(const ComplexMatrix& l, double cluster_tol = 0.0,
                                const Tolerances& tols = default_tolerances());
SpectralDecomposition decompose(const Superoperator& l, double cluster_tol = 0.0,
                                const Tolerances& tols = default_tolerances());

/// Omega = sum y y^+ and Omega^-1 = sum x x^+, validated: both Hermitian and
/// positive definite, product within metric_product of the identity, and
/// <<x_nu| Omega |x_mu>> = delta to the biorthonormality tolerance.
MetricOperator build_metric(const SpectralDecomposition& dec,
                            const Tolerances& tols = default_tolerances());

/// Residuals of the metric similarity Omega L Omega^-1 = L*^+ together with
/// its four rearrangements, where * conjugates eigenvalues only:
/// L* = sum x conj(lambda) y^+.
struct SimilarityResidual {
    double similarity;  // || Omega L Omega^-1 - L*^+ ||_F / ||L||_F
    double bundle_max;  // worst of the four rearranged identities
    double max() const { return similarity > bundle_max ? similarity : bundle_max; }
};

SimilarityResidual verify_similarity(const ComplexMatrix& l, const SpectralDecomposition& dec,
                                     const MetricOperator& m);
SimilarityResidual verify_similarity(const Superoperator& l, const SpectralDecomposition& dec,
                                     const MetricOperator& m);

/// max |<<x_mu| Omega |x_mu*>>| over conjugate eigenvalue pairs; these states
/// are orthogonal in the Omega metric. Returns 0 for a real spectrum.
double conjugate_pair_orthogonality(const SpectralDecomposition& dec, const MetricOperator& m);

/// sum_nu lambda_nu |x_nu><y_nu|, which reproduces the original generator.
ComplexMatrix reconstruct(const SpectralDecomposition& dec);

}  // namespace pumped
