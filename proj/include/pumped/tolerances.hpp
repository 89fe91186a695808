#pragma once

namespace pumped {

/// Every numeric threshold used by the library, collected in one record.
/// Functions take these as a parameter (defaulted) instead of hiding
/// magic constants locally.
struct Tolerances {
    // linear algebra core
    double solve_residual = 1e-10;     // relative residual bound for solve_linear
    double eig_residual = 1e-9;        // ||A v - lambda v|| <= eig_residual * ||A||_F
    double qr_deflation = 1e-12;       // relative subdiagonal deflation threshold
    double singular_rel = 1e-13;       // pivot below this * max pivot counts as zero

    // spectral decomposition
    double cluster_rel = 1e-8;         // default cluster width = cluster_rel * ||L||_F
    double gram_singular = 1e-10;      // cluster Gram singular => defective generator
    double biorthonormality = 1e-8;    // max |<<y_nu|x_mu>> - delta|
    double completeness = 1e-8;        // max |sum |x><y| - I|
    double non_decaying = 1e-12;       // Re(lambda) >= -non_decaying => error
    double similarity = 1e-7;          // residual bound for the metric similarity
    double reconstruction = 1e-7;      // relative Frobenius bound for sum x lambda y^+
    double pair_orthogonality = 1e-8;  // |<<x_mu| Omega |x_mu*>>| bound
    double metric_hermitian = 1e-8;
    double metric_product = 1e-8;      // || Omega Omega^-1 - I ||

    // model and states
    double hermiticity_strict = 1e-12;  // H, pump construction-time symmetry
    double hermiticity_state = 1e-9;    // propagated density matrices
    double population_floor = 1e-9;     // diagonal >= -population_floor
    double pump_psd = 1e-10;            // smallest pump eigenvalue >= -pump_psd

    // dynamics
    double steady_residual = 1e-9;      // ||L rho0 + Lambda|| <= this * ||Lambda||
    double mode_reconstruction = 1e-8;  // ||sum r_nu x_nu - delta_rho|| bound
    double lyapunov_slack = 1e-10;      // permitted increase between samples
    double lyapunov_imag = 1e-10;       // tolerated imaginary residue of v^+ Omega v
    double lyapunov_floor = 1e-12;      // permitted negative excursion of M
    double blowup_factor = 1e12;        // integrator norm growth => instability

    // pump ensemble
    double weight_normalization = 1e-12;
    double amplitude_normalization = 1e-10;
    double ensemble_residual = 1e-4;    // master-equation residual at step 1e-3
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

}  // namespace pumped
