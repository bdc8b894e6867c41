// exact.hpp — exact complex-rational scalars and the Eigen glue around them.
//
// Every symbolic quantity in the library is an Eigen matrix over ExactComplex.
// Floating point only appears when a value is handed to the numeric oracle,
// at which point (2π)^p factors are substituted as doubles.

#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <complex>
#include <string>
#include <string_view>

namespace qboltz {

using Rational = mpq_class;

/// Parse "p/q", "p", or a finite decimal such as "-1.25" into a canonical rational.
/// Throws Error(MalformedInput) on anything else (including zero denominators).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

struct ExactComplex {
    Rational re{0};
    Rational im{0};

    ExactComplex() = default;
    ExactComplex(int v) : re(v) {}  // NOLINT(google-explicit-constructor): Eigen builds literals from ints
    ExactComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static ExactComplex i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

    ExactComplex& operator+=(const ExactComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ExactComplex& operator-=(const ExactComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    ExactComplex& operator*=(const ExactComplex& o) {
        if (sgn(im) == 0 && sgn(o.im) == 0) {
            re *= o.re;
            return *this;
        }
        Rational r = re * o.re - im * o.im;
        Rational s = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(s);
        return *this;
    }
    ExactComplex& operator/=(const ExactComplex& o);

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
    friend ExactComplex operator-(const ExactComplex& a) { return {Rational(-a.re), Rational(-a.im)}; }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }
};

inline ExactComplex conj(const ExactComplex& z) { return {z.re, Rational(-z.im)}; }

inline std::complex<double> to_complex(const ExactComplex& z) { return {z.re.get_d(), z.im.get_d()}; }

std::string to_string(const ExactComplex& z);

}  // namespace qboltz

namespace Eigen {

template <>
struct NumTraits<qboltz::ExactComplex> : GenericNumTraits<qboltz::ExactComplex> {
    using Real = qboltz::ExactComplex;
    using NonInteger = qboltz::ExactComplex;
    using Nested = qboltz::ExactComplex;
    using Literal = qboltz::ExactComplex;
    enum {
        // Kept at 0 so Eigen never routes through std::real/std::conj; conjugation
        // is done explicitly by qboltz::adjoint.
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 8,
        MulCost = 32
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace qboltz {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ExactMatrix = Matrix<ExactComplex>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// 2π as used at every symbolic/numeric comparison boundary.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Zero-skipping product; system matrices are mostly single-entry flips.
ExactMatrix exact_product(const ExactMatrix& a, const ExactMatrix& b);

/// Conjugate transpose.
ExactMatrix adjoint(const ExactMatrix& m);

bool is_zero(const ExactMatrix& m);

bool operator_equal(const ExactMatrix& a, const ExactMatrix& b);

/// Lifts an exact matrix to doubles, multiplying by (2π)^two_pi_power.
ComplexMatrix to_numeric(const ExactMatrix& m, int two_pi_power = 0);

/// If `m` is a scalar multiple of `basis` (basis nonzero), returns true and writes the factor.
bool scalar_multiple_of(const ExactMatrix& m, const ExactMatrix& basis, ExactComplex* factor = nullptr);

}  // namespace qboltz
