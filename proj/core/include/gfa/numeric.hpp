#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfa {

using Complex = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error raised by library operations on invalid input or exhausted budgets.
class Error : public std::runtime_error {
public:
    enum class Kind {
        InvalidInput,
        Syntax,
        Domain,
        Precondition,
        Budget,
        Mismatch,
        Aliasing,
    };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// A complex value carried as exp(log_mag) * dir with |dir| == 1.
///
/// Magnitudes like eps^(-m^2) on deep geometric grids leave double range
/// quickly; every family evaluation therefore goes through this
/// representation, and sup/fit machinery reads log_mag directly.
/// Zero is canonically (log_mag = -inf, dir = 0).
struct LogComplex {
    double log_mag = -kInf;
    Complex dir{0.0, 0.0};

    LogComplex() = default;
    LogComplex(double lm, Complex d) : log_mag(lm), dir(d) {}

    static LogComplex zero() { return LogComplex(); }
    static LogComplex one() { return {0.0, Complex(1.0, 0.0)}; }

    static LogComplex from_complex(Complex z) {
        double a = std::abs(z);
        if (a == 0.0) return zero();
        return {std::log(a), z / a};
    }
    static LogComplex from_real(double x) {
        if (x == 0.0) return zero();
        return {std::log(std::abs(x)), Complex(x < 0 ? -1.0 : 1.0, 0.0)};
    }
    /// exp(lm) * sign without ever forming the magnitude.
    static LogComplex from_log_real(double lm, double sign = 1.0) {
        if (sign == 0.0 || lm == -kInf) return zero();
        return {lm, Complex(sign < 0 ? -1.0 : 1.0, 0.0)};
    }

    bool is_zero() const { return log_mag == -kInf; }
    bool is_finite() const {
        return (is_zero() || std::isfinite(log_mag)) && std::isfinite(dir.real()) &&
               std::isfinite(dir.imag());
    }

    /// May overflow/underflow to inf/0 when |log_mag| is large; by design.
    Complex to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        return std::exp(log_mag) * dir;
    }
    double real() const { return to_complex().real(); }

    LogComplex operator-() const {
        if (is_zero()) return zero();
        return {log_mag, -dir};
    }
};

inline LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return LogComplex::zero();
    return {a.log_mag + b.log_mag, a.dir * b.dir};
}

inline LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (b.is_zero()) throw Error(Error::Kind::Domain, "division by zero net value");
    if (a.is_zero()) return LogComplex::zero();
    return {a.log_mag - b.log_mag, a.dir / b.dir};
}

inline LogComplex operator+(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogComplex& big = a.log_mag >= b.log_mag ? a : b;
    const LogComplex& small = a.log_mag >= b.log_mag ? b : a;
    double gap = small.log_mag - big.log_mag;  // <= 0
    if (gap < -745.0) return big;              // below double resolution of the sum
    Complex m = big.dir + std::exp(gap) * small.dir;
    double am = std::abs(m);
    if (am == 0.0) return LogComplex::zero();
    return {big.log_mag + std::log(am), m / am};
}

inline LogComplex operator-(const LogComplex& a, const LogComplex& b) { return a + (-b); }

/// Power with real exponent; negative real base requires an integer exponent.
inline LogComplex pow(const LogComplex& a, double q) {
    if (a.is_zero()) {
        if (q > 0) return LogComplex::zero();
        if (q == 0) return LogComplex::one();
        throw Error(Error::Kind::Domain, "zero raised to a negative power");
    }
    Complex d;
    if (a.dir.imag() == 0.0) {
        double s = a.dir.real();
        if (s > 0) {
            d = Complex(1.0, 0.0);
        } else if (q == std::rint(q)) {
            d = Complex(std::rint(q) * 0.5 == std::floor(std::rint(q) * 0.5) ? 1.0 : -1.0, 0.0);
        } else {
            throw Error(Error::Kind::Domain, "negative base with non-integer exponent");
        }
    } else {
        d = std::pow(a.dir, Complex(q, 0.0));
    }
    return {a.log_mag * q, d};
}

inline LogComplex exp(const LogComplex& a) {
    if (a.is_zero()) return LogComplex::one();
    // The exponent itself must fit in a double; its exp need not.
    if (a.log_mag > 709.0) {
        double re = a.dir.real() >= 0 ? kInf : -kInf;
        return LogComplex::from_log_real(re > 0 ? kInf : -kInf, 1.0);
    }
    Complex z = a.to_complex();
    return {z.real(), std::polar(1.0, z.imag())};
}

inline LogComplex log(const LogComplex& a) {
    if (a.is_zero()) throw Error(Error::Kind::Domain, "log of zero");
    Complex w(a.log_mag, std::arg(a.dir));
    return LogComplex::from_complex(w);
}

inline LogComplex sqrt(const LogComplex& a) { return pow(a, 0.5); }

inline double abs_log(const LogComplex& a) { return a.log_mag; }

/// Natural-log magnitude of a complex number, -inf for zero.
inline double safe_log_abs(Complex z) {
    double a = std::abs(z);
    return a == 0.0 ? -kInf : std::log(a);
}

// ---------------------------------------------------------------------------
// Quadrature

/// Adaptive Simpson on [a, b]. `rel_tol` is relative to the running integral
/// scale, with `abs_floor` as the absolute cutoff for refinement.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double rel_tol = 1e-10, double abs_floor = 1e-300,
                         int max_depth = 32);

/// Composite Simpson with n panels (n made even internally).
Complex composite_simpson(const std::function<Complex(double)>& f, double a, double b, int n);

/// Composite 16-point Gauss-Legendre over `panels` panels.
/// Independent of the Simpson path; used as a cross-check oracle in tests.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 8);

// ---------------------------------------------------------------------------
// Misc

/// Least-squares line y = slope*x + intercept. Returns {slope, intercept, max_abs_residual}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gfa
