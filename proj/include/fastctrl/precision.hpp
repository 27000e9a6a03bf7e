#pragma once

// Arbitrary-precision scalar support. Real is an MPFR-backed float whose
// working precision is set at runtime through PrecisionContext; Cx<T> is a
// minimal complex type over any real scalar (std::complex is not usable with
// multiprecision backends).

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <mutex>

#include "fastctrl/errors.hpp"

namespace fastctrl {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

// Working decimal precision for every arithmetic operation performed while a
// PrecisionGuard for this context is alive.
struct PrecisionContext {
    int digits = 30;

    PrecisionContext() = default;
    explicit PrecisionContext(int d) : digits(d) {
        if (d < 15) throw DomainError("PrecisionContext: digits must be >= 15");
    }
};

namespace detail {
inline std::recursive_mutex& precision_mutex() {
    static std::recursive_mutex m;
    return m;
}
}  // namespace detail

// Sets the MPFR default precision for the enclosed scope. The default
// precision is process-global in this Boost version, so the guard also
// serializes multiprecision sections across threads.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(PrecisionContext ctx)
        : lock_(detail::precision_mutex()), saved_(Real::default_precision()) {
        Real::default_precision(static_cast<unsigned>(ctx.digits));
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }

    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned saved_;
};

template <typename T>
struct Cx {
    T re{};
    T im{};

    Cx() = default;
    Cx(T r) : re(std::move(r)) {}
    Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    Cx operator-() const { return {-re, -im}; }
    Cx& operator+=(const Cx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cx& operator-=(const Cx& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Cx& operator*=(const Cx& o) {
        T r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cx& operator*=(const T& s) {
        re *= s;
        im *= s;
        return *this;
    }
};

template <typename T>
Cx<T> operator+(Cx<T> a, const Cx<T>& b) { return a += b; }
template <typename T>
Cx<T> operator-(Cx<T> a, const Cx<T>& b) { return a -= b; }
template <typename T>
Cx<T> operator*(Cx<T> a, const Cx<T>& b) { return a *= b; }
template <typename T>
Cx<T> operator*(Cx<T> a, const T& s) { return a *= s; }
template <typename T>
Cx<T> operator*(const T& s, Cx<T> a) { return a *= s; }

template <typename T>
Cx<T> conj(const Cx<T>& a) { return {a.re, -a.im}; }

template <typename T>
T abs2(const Cx<T>& a) { return a.re * a.re + a.im * a.im; }

template <typename T>
T abs(const Cx<T>& a) {
    using std::sqrt;
    return sqrt(abs2(a));
}

template <typename T>
Cx<T> operator/(const Cx<T>& a, const Cx<T>& b) {
    T d = abs2(b);
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <typename T>
Cx<T> operator/(const Cx<T>& a, const T& s) { return {a.re / s, a.im / s}; }

// e^{i theta}
template <typename T>
Cx<T> cis(const T& theta) {
    using std::cos;
    using std::sin;
    return {cos(theta), sin(theta)};
}

template <typename T>
Cx<T> exp(const Cx<T>& z) {
    using std::exp;
    return exp(z.re) * cis(z.im);
}

using CReal = Cx<Real>;

inline std::complex<double> to_complex(const CReal& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

inline CReal to_creal(const std::complex<double>& z) {
    return {Real(z.real()), Real(z.imag())};
}

// Scalar traits used by the dense solver so it can run on Real and CReal
// alike.
template <typename T>
struct ScalarTraits {
    using RealType = T;
    static T conjugate(const T& x) { return x; }
    static RealType real_part(const T& x) { return x; }
    static RealType abs_sq(const T& x) { return x * x; }
};

template <typename T>
struct ScalarTraits<Cx<T>> {
    using RealType = T;
    static Cx<T> conjugate(const Cx<T>& x) { return conj(x); }
    static RealType real_part(const Cx<T>& x) { return x.re; }
    static RealType abs_sq(const Cx<T>& x) { return abs2(x); }
};

}  // namespace fastctrl
