#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "pumped/tolerances.hpp"

namespace pumped {

using Complex = std::complex<double>;

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : entries_(n, Complex{}) {}
    ComplexVector(std::initializer_list<Complex> entries);
    static ComplexVector from(std::vector<Complex> entries);

    std::size_t size() const { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }

    double norm() const;
    double max_abs() const;
    bool is_finite() const;

    ComplexVector& operator+=(const ComplexVector& rhs);
    ComplexVector& operator-=(const ComplexVector& rhs);
    ComplexVector& operator*=(Complex s);

    friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
    friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
    friend ComplexVector operator*(Complex s, ComplexVector v) { return v *= s; }

private:
    std::vector<Complex> entries_;
};

/// <<y|x>> = y^+ x, antilinear in the first argument.
Complex inner(const ComplexVector& y, const ComplexVector& x);

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex{}) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);
    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_ && rows_ > 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;
    /// max |A - A^+| entry; 0 for exactly Hermitian matrices.
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

/// a b^+ outer product.
ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

/// Flatten an N x N matrix into a length-N^2 vector, index pairs (n,m)
/// ascending lexicographically: (1,1), (1,2), ..., (N,N).
ComplexVector vectorize(const ComplexMatrix& rho);

/// Inverse of vectorize. Throws DimensionError unless v.size() == n^2.
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t n);

/// LU factorization with partial pivoting, reusable for several solves.
class LuFactorization {
public:
    /// Factors a copy of `a`. Throws SingularMatrixError (with the estimated
    /// rank deficiency) when a pivot falls below tols.singular_rel * max pivot.
    explicit LuFactorization(const ComplexMatrix& a,
                             const Tolerances& tols = default_tolerances());

    ComplexVector solve(const ComplexVector& b) const;
    ComplexMatrix solve(const ComplexMatrix& b) const;

private:
    std::size_t n_ = 0;
    ComplexMatrix lu_;
    std::vector<std::size_t> pivots_;
};

/// Solve a x = b by pivoted elimination plus one step of iterative
/// refinement. Relative residual ||ax-b|| / (||a|| ||x|| + ||b||) stays
/// below tols.solve_residual for well-conditioned systems.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b,
                           const Tolerances& tols = default_tolerances());

ComplexMatrix inverse(const ComplexMatrix& a,
                      const Tolerances& tols = default_tolerances());

/// Cholesky probe: true iff the Hermitian part of `a` is positive definite.
bool is_positive_definite(const ComplexMatrix& a);

struct Eigenpair {
    Complex value;
    ComplexVector vector;  // unit 2-norm, first significant component real positive
};

/// Dense non-Hermitian eigendecomposition: balancing, Householder reduction
/// to Hessenberg form, shifted QR for the eigenvalues, inverse iteration for
/// the eigenvectors. Returns exactly n pairs sorted by (Re descending,
/// Im ascending); every pair satisfies ||A v - lambda v|| <= eig_residual ||A||_F.
/// Throws ConvergenceError when the iteration budget is exhausted.
std::vector<Eigenpair> eig_general(const ComplexMatrix& a,
                                   const Tolerances& tols = default_tolerances());

/// Group indices of values lying within tol of each other (transitive
/// closure, so a chain of close values forms one cluster). Each cluster is
/// sorted ascending; clusters are ordered by their first member.
std::vector<std::vector<std::size_t>> cluster_indices(const std::vector<Complex>& values,
                                                      double tol);

}  // namespace pumped
