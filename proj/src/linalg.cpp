#include "pumped/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "pumped/errors.hpp"

namespace pumped {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string dims(std::size_t r, std::size_t c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::initializer_list<Complex> entries) : entries_(entries) {
    if (!is_finite()) throw DomainError("vector entries must be finite");
}

ComplexVector ComplexVector::from(std::vector<Complex> entries) {
    ComplexVector v;
    v.entries_ = std::move(entries);
    if (!v.is_finite()) throw DomainError("vector entries must be finite");
    return v;
}

double ComplexVector::norm() const {
    double s = 0.0;
    for (Complex z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexVector::max_abs() const {
    double m = 0.0;
    for (Complex z : entries_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexVector::is_finite() const {
    for (Complex z : entries_)
        if (!finite(z)) return false;
    return true;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& rhs) {
    if (size() != rhs.size()) throw DimensionError("vector size mismatch in +=");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& rhs) {
    if (size() != rhs.size()) throw DimensionError("vector size mismatch in -=");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

ComplexVector& ComplexVector::operator*=(Complex s) {
    for (Complex& z : entries_) z *= s;
    return *this;
}

Complex inner(const ComplexVector& y, const ComplexVector& x) {
    if (y.size() != x.size()) throw DimensionError("vector size mismatch in inner product");
    Complex s{};
    for (std::size_t i = 0; i < y.size(); ++i) s += std::conj(y[i]) * x[i];
    return s;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (!is_finite()) throw DomainError("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) m.entries_[i] = std::conj(entries_[i]);
    return m;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    Complex t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (Complex z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (Complex z : entries_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::is_finite() const {
    for (Complex z : entries_)
        if (!finite(z)) return false;
    return true;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) throw DimensionError("hermiticity defect of non-square matrix");
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionError("matrix shape mismatch in +=: " + dims(rows_, cols_) + " vs " +
                             dims(rhs.rows_, rhs.cols_));
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionError("matrix shape mismatch in -=: " + dims(rows_, cols_) + " vs " +
                             dims(rhs.rows_, rhs.cols_));
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& z : entries_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    if (a.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
    ComplexVector w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
    ComplexMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

// ---------------------------------------------------------------------------
// Vectorization

ComplexVector vectorize(const ComplexMatrix& rho) {
    if (!rho.is_square()) throw DimensionError("vectorize expects a square matrix");
    const std::size_t n = rho.rows();
    ComplexVector v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = rho(i, j);
    return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t n) {
    if (v.size() != n * n)
        throw DimensionError("unvectorize: vector of length " + std::to_string(v.size()) +
                             " does not fill a " + dims(n, n) + " matrix");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

LuFactorization::LuFactorization(const ComplexMatrix& a, const Tolerances& tols) : lu_(a) {
    if (!a.is_square()) throw DimensionError("LU factorization expects a square matrix");
    n_ = a.rows();
    pivots_.resize(n_);

    double max_pivot = 0.0;
    std::vector<double> pivot_sizes(n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double cand = std::abs(lu_(i, k));
            if (cand > best) {
                best = cand;
                p = i;
            }
        }
        pivots_[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));

        pivot_sizes[k] = best;
        max_pivot = std::max(max_pivot, best);
        if (best == 0.0) continue;  // leave the zero column; counted below

        const Complex inv_piv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n_; ++i) {
            const Complex m = lu_(i, k) * inv_piv;
            lu_(i, k) = m;
            if (m == Complex{}) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }

    const double floor = tols.singular_rel * max_pivot;
    std::size_t deficiency = 0;
    for (double p : pivot_sizes)
        if (p <= floor) ++deficiency;
    if (deficiency > 0)
        throw SingularMatrixError("matrix singular to tolerance (estimated rank deficiency " +
                                      std::to_string(deficiency) + " of " + std::to_string(n_) + ")",
                                  deficiency);
}

ComplexVector LuFactorization::solve(const ComplexVector& b) const {
    if (b.size() != n_) throw DimensionError("LU solve: right-hand side length mismatch");
    ComplexVector x = b;
    // the factorization swapped whole rows, multipliers included, so all
    // permutations go first, then the clean triangular solves
    for (std::size_t k = 0; k < n_; ++k)
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = k + 1; i < n_; ++i) x[i] -= lu_(i, k) * x[k];
    for (std::size_t k = n_; k-- > 0;) {
        for (std::size_t j = k + 1; j < n_; ++j) x[k] -= lu_(k, j) * x[j];
        x[k] /= lu_(k, k);
    }
    return x;
}

ComplexMatrix LuFactorization::solve(const ComplexMatrix& b) const {
    if (b.rows() != n_) throw DimensionError("LU solve: right-hand side rows mismatch");
    ComplexMatrix x(n_, b.cols());
    ComplexVector col(n_);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n_; ++i) col[i] = b(i, j);
        ComplexVector sol = solve(col);
        for (std::size_t i = 0; i < n_; ++i) x(i, j) = sol[i];
    }
    return x;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b, const Tolerances& tols) {
    if (!a.is_square()) throw DimensionError("solve_linear expects a square matrix");
    if (a.rows() != b.size()) throw DimensionError("solve_linear: right-hand side length mismatch");
    LuFactorization lu(a, tols);
    ComplexVector x = lu.solve(b);
    // one step of iterative refinement
    ComplexVector r = b - a * x;
    x += lu.solve(r);
    return x;
}

ComplexMatrix inverse(const ComplexMatrix& a, const Tolerances& tols) {
    LuFactorization lu(a, tols);
    return lu.solve(ComplexMatrix::identity(a.rows()));
}

bool is_positive_definite(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("positive-definite probe expects a square matrix");
    const std::size_t n = a.rows();
    ComplexMatrix h(n, n);  // Hermitian part
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Dense non-Hermitian eigensolver

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// splitmix64: platform-independent deterministic start vectors
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ComplexVector random_unit_vector(std::size_t n, std::uint64_t seed) {
    std::uint64_t state = seed;
    ComplexVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
        const double im = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
        v[i] = Complex(re, im);
    }
    const double nrm = v.norm();
    if (nrm == 0.0) {
        ComplexVector e(n);
        e[0] = 1.0;
        return e;
    }
    v *= 1.0 / nrm;
    return v;
}

// Parlett-Reinsch balancing: diagonal similarity with radix-2 scale factors.
// Returns the scale vector d such that the balanced matrix is D^-1 A D.
std::vector<double> balance(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> scale(n, 1.0);
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(a(i, j));
                c += std::abs(a(j, i));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                scale[i] *= f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= ginv;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
    return scale;
}

// Householder reduction to upper Hessenberg form; accumulates the unitary Q
// with A = Q H Q^+.
void hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
    const std::size_t n = a.rows();
    q = ComplexMatrix::identity(n);
    if (n < 3) return;
    std::vector<Complex> u;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column tail
        double norm_x = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm_x += std::norm(a(k + 1 + i, k));
        norm_x = std::sqrt(norm_x);
        if (norm_x == 0.0) continue;

        const Complex x0 = a(k + 1, k);
        const Complex phase = (x0 != Complex{}) ? x0 / std::abs(x0) : Complex(1.0);
        const Complex alpha = -phase * norm_x;

        u.assign(m, Complex{});
        for (std::size_t i = 0; i < m; ++i) u[i] = a(k + 1 + i, k);
        u[0] -= alpha;
        double unorm2 = 0.0;
        for (const Complex& z : u) unorm2 += std::norm(z);
        if (unorm2 <= kEps * kEps * norm_x * norm_x) continue;
        const double beta = 2.0 / unorm2;

        // left: rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            Complex w{};
            for (std::size_t i = 0; i < m; ++i) w += std::conj(u[i]) * a(k + 1 + i, j);
            w *= beta;
            for (std::size_t i = 0; i < m; ++i) a(k + 1 + i, j) -= w * u[i];
        }
        // right: columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            Complex w{};
            for (std::size_t j = 0; j < m; ++j) w += a(i, k + 1 + j) * u[j];
            w *= beta;
            for (std::size_t j = 0; j < m; ++j) a(i, k + 1 + j) -= w * std::conj(u[j]);
        }
        // accumulate Q <- Q P
        for (std::size_t i = 0; i < n; ++i) {
            Complex w{};
            for (std::size_t j = 0; j < m; ++j) w += q(i, k + 1 + j) * u[j];
            w *= beta;
            for (std::size_t j = 0; j < m; ++j) q(i, k + 1 + j) -= w * std::conj(u[j]);
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

struct Givens {
    Complex g00, g01, g10, g11;
};

// Unitary 2x2 with G (a, b)^T = (r, 0)^T, r real nonnegative.
Givens make_givens(Complex a, Complex b) {
    const double r = std::hypot(std::abs(a), std::abs(b));
    if (r == 0.0) return {1.0, 0.0, 0.0, 1.0};
    return {std::conj(a) / r, std::conj(b) / r, -b / r, a / r};
}

// Both roots of the 2x2 block [[a, b], [c, d]], cancellation-safe.
std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c, Complex d) {
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    Complex s = std::sqrt(tr * tr - 4.0 * det);
    if ((std::conj(tr) * s).real() < 0.0) s = -s;
    const Complex r1 = 0.5 * (tr + s);
    const Complex r2 = (std::abs(r1) > 0.0) ? det / r1 : Complex{};
    return {r1, r2};
}

// Eigenvalues of an upper Hessenberg matrix by shifted QR. Destroys h.
std::vector<Complex> qr_eigenvalues(ComplexMatrix& h, const Tolerances& tols) {
    const std::size_t n = h.rows();
    std::vector<Complex> eigs(n);
    if (n == 0) return eigs;
    const double frob = std::max(h.frobenius_norm(), kEps);

    auto negligible = [&](std::size_t i) {
        double thr = tols.qr_deflation * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
        if (thr == 0.0) thr = tols.qr_deflation * frob;
        return std::abs(h(i, i - 1)) <= thr;
    };

    std::size_t hi = n - 1;
    std::size_t iters_at_hi = 0;
    std::size_t total_iters = 0;
    const std::size_t budget = 40 * n;

    while (true) {
        // deflate converged trailing eigenvalues and locate the active block
        std::size_t lo = hi;
        while (lo > 0 && !negligible(lo)) --lo;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        if (lo == hi) {
            eigs[hi] = h(hi, hi);
            if (hi == 0) break;
            --hi;
            iters_at_hi = 0;
            continue;
        }
        if (lo + 1 == hi) {
            auto [r1, r2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eigs[hi] = r1;
            eigs[lo] = r2;
            if (lo == 0) break;
            hi = lo - 1;
            iters_at_hi = 0;
            continue;
        }

        if (++total_iters > budget)
            throw ConvergenceError("QR iteration budget exhausted after " +
                                   std::to_string(budget) + " sweeps");

        // shift: Wilkinson from the trailing 2x2, with a periodic exceptional shift
        Complex mu;
        if (++iters_at_hi % 10 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            auto [r1, r2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            mu = (std::abs(r1 - h(hi, hi)) < std::abs(r2 - h(hi, hi))) ? r1 : r2;
        }

        // implicit single-shift bulge chase over [lo, hi]
        Complex x = h(lo, lo) - mu;
        Complex y = h(lo + 1, lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens g = make_givens(x, y);
            const std::size_t jlo = (k > lo) ? k - 1 : lo;
            for (std::size_t j = jlo; j <= hi; ++j) {
                const Complex t0 = h(k, j), t1 = h(k + 1, j);
                h(k, j) = g.g00 * t0 + g.g01 * t1;
                h(k + 1, j) = g.g10 * t0 + g.g11 * t1;
            }
            const std::size_t imax = std::min(hi, k + 2);
            for (std::size_t i = lo; i <= imax; ++i) {
                const Complex t0 = h(i, k), t1 = h(i, k + 1);
                h(i, k) = std::conj(g.g00) * t0 + std::conj(g.g01) * t1;
                h(i, k + 1) = std::conj(g.g10) * t0 + std::conj(g.g11) * t1;
            }
            if (k + 1 < hi) {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
    }
    return eigs;
}

// LU of a Hessenberg matrix with partial pivoting and zero-pivot flooring,
// for inverse iteration on nearly singular shifts.
class HessenbergLu {
public:
    HessenbergLu(const ComplexMatrix& h, Complex shift, double pivot_floor) : m_(h), n_(h.rows()) {
        for (std::size_t i = 0; i < n_; ++i) m_(i, i) -= shift;
        swaps_.assign(n_, false);
        mults_.assign(n_, Complex{});
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            if (std::abs(m_(k + 1, k)) > std::abs(m_(k, k))) {
                swaps_[k] = true;
                for (std::size_t j = k; j < n_; ++j) std::swap(m_(k, j), m_(k + 1, j));
            }
            if (std::abs(m_(k, k)) < pivot_floor) m_(k, k) = pivot_floor;
            const Complex mult = m_(k + 1, k) / m_(k, k);
            mults_[k] = mult;
            m_(k + 1, k) = 0.0;
            for (std::size_t j = k + 1; j < n_; ++j) m_(k + 1, j) -= mult * m_(k, j);
        }
        if (std::abs(m_(n_ - 1, n_ - 1)) < pivot_floor) m_(n_ - 1, n_ - 1) = pivot_floor;
    }

    ComplexVector solve(const ComplexVector& b) const {
        ComplexVector x = b;
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            if (swaps_[k]) std::swap(x[k], x[k + 1]);
            x[k + 1] -= mults_[k] * x[k];
        }
        for (std::size_t k = n_; k-- > 0;) {
            for (std::size_t j = k + 1; j < n_; ++j) x[k] -= m_(k, j) * x[j];
            x[k] /= m_(k, k);
        }
        return x;
    }

private:
    ComplexMatrix m_;
    std::size_t n_;
    std::vector<bool> swaps_;
    std::vector<Complex> mults_;
};

void fix_gauge(ComplexVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > 1e-12) {
            v *= std::conj(v[i]) / a;
            return;
        }
    }
}

double eig_residual(const ComplexMatrix& a, Complex lambda, const ComplexVector& v) {
    ComplexVector r = a * v;
    r -= lambda * v;
    return r.norm();
}

}  // namespace

std::vector<std::vector<std::size_t>> cluster_indices(const std::vector<Complex>& values,
                                                      double tol) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);

    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::ptrdiff_t> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return clusters;
}

std::vector<Eigenpair> eig_general(const ComplexMatrix& a, const Tolerances& tols) {
    if (!a.is_square()) throw DimensionError("eig_general expects a square matrix");
    if (!a.is_finite()) throw DomainError("eig_general: matrix entries must be finite");
    const std::size_t n = a.rows();

    if (n == 1) {
        ComplexVector e(1);
        e[0] = 1.0;
        return {Eigenpair{a(0, 0), e}};
    }

    // balance, then reduce to Hessenberg form
    ComplexMatrix work = a;
    const std::vector<double> scale = balance(work);
    ComplexMatrix q;
    hessenberg(work, q);
    const ComplexMatrix hess = work;  // pristine copy for inverse iteration

    std::vector<Complex> eigs = qr_eigenvalues(work, tols);
    std::sort(eigs.begin(), eigs.end(), [](Complex l, Complex r) {
        if (l.real() != r.real()) return l.real() > r.real();
        return l.imag() < r.imag();
    });

    const double frob_a = a.frobenius_norm();
    const double frob_h = std::max(hess.frobenius_norm(), kEps);
    const double pivot_floor = kEps * frob_h;
    const double cluster_tol = tols.cluster_rel * std::max(frob_a, kEps);
    const double residual_bound = tols.eig_residual * std::max(frob_a, kEps);

    std::vector<Eigenpair> pairs(n);
    for (const std::vector<std::size_t>& cluster : cluster_indices(eigs, cluster_tol)) {
        for (std::size_t member = 0; member < cluster.size(); ++member) {
            const std::size_t idx = cluster[member];
            const Complex lambda = eigs[idx];
            const HessenbergLu lu(hess, lambda, pivot_floor);
            ComplexVector best;
            double best_res = std::numeric_limits<double>::infinity();
            for (std::size_t attempt = 0; attempt < 4 && best_res > residual_bound; ++attempt) {
                ComplexVector v =
                    random_unit_vector(n, 0x51CA5EEDull + 613 * idx + 7919 * attempt + member);
                // accept the first iterate meeting the bound; further solves
                // can rotate a defective generator's iterate away again
                for (int it = 0; it < 3; ++it) {
                    ComplexVector w = lu.solve(v);
                    const double nw = w.norm();
                    if (!(nw > 0.0) || !w.is_finite()) break;
                    w *= 1.0 / nw;
                    v = w;
                    // transform back: balanced Hessenberg vector -> original basis
                    ComplexVector u = q * v;
                    for (std::size_t i = 0; i < n; ++i) u[i] *= scale[i];
                    const double nu = u.norm();
                    if (!(nu > 0.0) || !u.is_finite()) break;
                    u *= 1.0 / nu;
                    const double res = eig_residual(a, lambda, u);
                    if (res < best_res) {
                        best_res = res;
                        best = u;
                    }
                    if (res <= residual_bound) break;
                }
            }
            if (!(best_res <= residual_bound))
                throw ConvergenceError("inverse iteration failed to reach the residual bound "
                                       "for eigenvalue index " + std::to_string(idx));

            // orthogonalize inside a degenerate cluster so repeated eigenvalues
            // come with independent vectors; a defective generator keeps its
            // (nearly parallel) copies and is detected downstream
            if (member > 0) {
                ComplexVector v = best;
                for (std::size_t j = 0; j < member; ++j) {
                    const ComplexVector& prev = pairs[cluster[j]].vector;
                    v -= inner(prev, v) * prev;
                }
                const double nv = v.norm();
                if (nv > 1e-8) {
                    v *= 1.0 / nv;
                    if (eig_residual(a, lambda, v) <= residual_bound) best = v;
                }
            }

            fix_gauge(best);
            pairs[idx] = Eigenpair{lambda, std::move(best)};
        }
    }
    return pairs;
}

}  // namespace pumped
