#include "qboltz/exact.hpp"

#include "qboltz/error.hpp"

#include <cctype>
#include <cmath>

namespace qboltz {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedInput: return "MALFORMED_INPUT";
        case ErrorCode::UnknownFrequency: return "UNKNOWN_FREQUENCY";
        case ErrorCode::UnknownLabel: return "UNKNOWN_LABEL";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::NotGeneric: return "NOT_GENERIC";
        case ErrorCode::CapacityExceeded: return "CAPACITY_EXCEEDED";
        case ErrorCode::BadCutoff: return "BAD_CUTOFF";
        case ErrorCode::OrderTooLarge: return "ORDER_TOO_LARGE";
        case ErrorCode::RepresentationMismatch: return "REPRESENTATION_MISMATCH";
    }
    return "UNKNOWN";
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad_rational(std::string_view text) {
    throw Error(ErrorCode::MalformedInput, "not an exact rational: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_rational(text);
        mpz_class d{std::string(den)};
        if (d == 0) bad_rational(text);
        value = Rational(mpz_class(std::string(num)), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            bad_rational(text);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac));
        value = Rational(digits, scale);
    } else {
        if (!all_digits(s)) bad_rational(text);
        value = Rational(mpz_class(std::string(s)));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const ExactComplex& z) {
    if (sgn(z.im) == 0) return z.re.get_str();
    if (sgn(z.re) == 0) return z.im.get_str() + "i";
    return z.re.get_str() + (sgn(z.im) > 0 ? "+" : "") + z.im.get_str() + "i";
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
    if (o.is_zero()) throw std::domain_error("ExactComplex: division by zero");
    Rational n = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / n;
    Rational s = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(s);
    return *this;
}

ExactMatrix exact_product(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    ExactMatrix out = ExactMatrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            const ExactComplex& lhs = a(i, k);
            if (lhs.is_zero()) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                const ExactComplex& rhs = b(k, j);
                if (rhs.is_zero()) continue;
                out(i, j) += lhs * rhs;
            }
        }
    }
    return out;
}

ExactMatrix adjoint(const ExactMatrix& m) {
    ExactMatrix out(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(j, i) = conj(m(i, j));
    return out;
}

bool is_zero(const ExactMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!m.data()[i].is_zero()) return false;
    return true;
}

bool operator_equal(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

ComplexMatrix to_numeric(const ExactMatrix& m, int two_pi_power) {
    const double scale = std::pow(kTwoPi, two_pi_power);
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_complex(m(i, j)) * scale;
    return out;
}

bool scalar_multiple_of(const ExactMatrix& m, const ExactMatrix& basis, ExactComplex* factor) {
    if (m.rows() != basis.rows() || m.cols() != basis.cols()) return false;
    Eigen::Index pivot = -1;
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
        if (!basis.data()[i].is_zero()) {
            pivot = i;
            break;
        }
    }
    if (pivot < 0) {
        if (factor) *factor = ExactComplex(0);
        return is_zero(m);
    }
    ExactComplex lambda = m.data()[pivot] / basis.data()[pivot];
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m.data()[i] != lambda * basis.data()[i]) return false;
    if (factor) *factor = lambda;
    return true;
}

}  // namespace qboltz
