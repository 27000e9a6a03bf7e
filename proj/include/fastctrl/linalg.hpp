#pragma once

// Small dense Hermitian linear algebra, generic over the scalar so the same
// code runs on MPFR reals and complexes. Matrices here never exceed a few
// dozen rows; clarity and positive-definiteness diagnostics matter, not blas
// performance.

#include <cstddef>
#include <vector>

#include "fastctrl/errors.hpp"
#include "fastctrl/precision.hpp"

namespace fastctrl {

template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

// LDL^H factorization with symmetric (largest-remaining-diagonal) pivoting of
// a Hermitian positive definite matrix: P A P^T = L D L^H.
template <typename T>
class LdltFactor {
  public:
    using R = typename ScalarTraits<T>::RealType;

    explicit LdltFactor(const Matrix<T>& a) : n_(a.rows()), lu_(a.rows(), a.cols()), perm_(a.rows()) {
        if (a.rows() != a.cols()) throw DomainError("LdltFactor: matrix not square");
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) lu_(i, j) = a(i, j);
        for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

        for (std::size_t k = 0; k < n_; ++k) {
            // Pivot on the largest remaining diagonal entry.
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n_; ++i)
                if (ScalarTraits<T>::real_part(lu_(i, i)) >
                    ScalarTraits<T>::real_part(lu_(p, p)))
                    p = i;
            if (p != k) swap_symmetric(k, p);

            R d = ScalarTraits<T>::real_part(lu_(k, k));
            if (!(d > R(0)))
                throw PrecisionInsufficient(
                    "LdltFactor: matrix not positive definite at working precision",
                    static_cast<double>(k));
            // Schur update of the whole trailing block from the still-unscaled
            // column k (pivot swaps exchange full rows/columns, so both
            // triangles stay live), then scale the column.
            for (std::size_t i = k + 1; i < n_; ++i)
                for (std::size_t j = k + 1; j < n_; ++j)
                    lu_(i, j) -= lu_(i, k) * ScalarTraits<T>::conjugate(lu_(j, k)) / T(d);
            for (std::size_t i = k + 1; i < n_; ++i) lu_(i, k) = lu_(i, k) / T(d);
        }
    }

    std::size_t size() const { return n_; }

    // Solves A x = b.
    std::vector<T> solve(const std::vector<T>& b) const {
        if (b.size() != n_) throw DomainError("LdltFactor::solve: size mismatch");
        std::vector<T> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
        // L y = Pb
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        // D z = y
        for (std::size_t i = 0; i < n_; ++i)
            x[i] = x[i] / T(ScalarTraits<T>::real_part(lu_(i, i)));
        // L^H w = z
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t j = i + 1; j < n_; ++j)
                x[i] -= ScalarTraits<T>::conjugate(lu_(j, i)) * x[j];
        // Undo the permutation.
        std::vector<T> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[perm_[i]] = x[i];
        return out;
    }

    Matrix<T> inverse() const {
        Matrix<T> inv(n_, n_);
        std::vector<T> e(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (auto& v : e) v = T(0);
            e[j] = T(1);
            auto col = solve(e);
            for (std::size_t i = 0; i < n_; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

  private:
    void swap_symmetric(std::size_t k, std::size_t p) {
        std::swap(perm_[k], perm_[p]);
        for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
        for (std::size_t i = 0; i < n_; ++i) std::swap(lu_(i, k), lu_(i, p));
    }

    std::size_t n_;
    Matrix<T> lu_;
    std::vector<std::size_t> perm_;
};

template <typename T>
typename ScalarTraits<T>::RealType one_norm(const Matrix<T>& a) {
    using std::abs;
    using R = typename ScalarTraits<T>::RealType;
    R best(0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        R col(0);
        for (std::size_t i = 0; i < a.rows(); ++i) col += abs(a(i, j));
        if (col > best) best = col;
    }
    return best;
}

template <typename T>
struct EigenPair {
    typename ScalarTraits<T>::RealType value{};
    std::vector<T> vector;
};

// Dominant eigenpair of a Hermitian PSD matrix by power iteration with
// Rayleigh quotients; the quotient sequence is non-decreasing, so seeding at
// the largest diagonal entry certifies value >= max diag. A deterministic
// spread start guards against a seed orthogonal to the top eigenspace.
template <typename T>
EigenPair<T> dominant_eigenpair(const Matrix<T>& a,
                                typename ScalarTraits<T>::RealType rel_tol,
                                int max_iter = 5000) {
    using std::sqrt;
    using R = typename ScalarTraits<T>::RealType;
    const std::size_t n = a.rows();

    std::size_t seed = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (ScalarTraits<T>::real_part(a(i, i)) > ScalarTraits<T>::real_part(a(seed, seed)))
            seed = i;

    auto iterate = [&](std::vector<T> v, R rho0) {
        R rho = rho0;
        for (int it = 0; it < max_iter; ++it) {
            std::vector<T> w(n, T(0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) w[i] += a(i, j) * v[j];
            R norm_sq(0);
            for (auto& wi : w) norm_sq += ScalarTraits<T>::abs_sq(wi);
            R norm = sqrt(norm_sq);
            if (!(norm > R(0))) break;
            R rho_new(0);
            for (std::size_t i = 0; i < n; ++i)
                rho_new += ScalarTraits<T>::real_part(ScalarTraits<T>::conjugate(v[i]) * w[i]);
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / T(norm);
            if (it > 0 && rho_new - rho <= rel_tol * rho_new)
                return EigenPair<T>{rho_new, std::move(v)};
            rho = rho_new;
        }
        return EigenPair<T>{rho, std::move(v)};
    };

    std::vector<T> e(n, T(0));
    e[seed] = T(1);
    EigenPair<T> best = iterate(std::move(e), ScalarTraits<T>::real_part(a(seed, seed)));

    std::vector<T> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = T((i % 2 == 0 ? R(1) : R(-1)) * R(1.0 + 0.1 * static_cast<double>(i)));
    R norm_sq(0);
    for (auto& si : s) norm_sq += ScalarTraits<T>::abs_sq(si);
    R norm = sqrt(norm_sq);
    for (auto& si : s) si = si / T(norm);
    EigenPair<T> second = iterate(std::move(s), R(0));
    return second.value > best.value ? second : best;
}

template <typename T>
typename ScalarTraits<T>::RealType
largest_eigenvalue(const Matrix<T>& a, typename ScalarTraits<T>::RealType rel_tol,
                   int max_iter = 5000) {
    return dominant_eigenpair(a, rel_tol, max_iter).value;
}

}  // namespace fastctrl
