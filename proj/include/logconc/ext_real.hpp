#ifndef LOGCONC_EXT_REAL_HPP
#define LOGCONC_EXT_REAL_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace logconc {

/// Thrown for malformed user input: dimension mismatches, invalid parameters,
/// empty effective domains.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value in (-inf, +inf].
///
/// Potentials never take the value -inf. The one place a -inf shows up is the
/// sup-form objective <x,y> - phi(y) when phi(y) = +inf; that case is handled by
/// `affine_minus`, which returns a sentinel that loses every supremum.
///
/// The carrier is an IEEE double whose +inf encodes the infinite member, so
/// grids of ExtReal values can be stored as plain double arrays.
template <typename Scalar>
class BasicExtReal {
public:
    constexpr BasicExtReal() = default;
    constexpr BasicExtReal(Scalar v) : v_(v) {  // NOLINT(implicit)
        if (std::isnan(v) || v == -std::numeric_limits<Scalar>::infinity())
            throw InputError("ExtReal: value must lie in (-inf, +inf]");
    }

    static constexpr BasicExtReal inf() { return BasicExtReal(Raw{}, std::numeric_limits<Scalar>::infinity()); }

    bool is_inf() const { return std::isinf(v_); }
    bool is_finite() const { return !is_inf(); }

    /// Finite value; throws when infinite.
    Scalar value() const {
        if (is_inf()) throw std::domain_error("ExtReal::value() on +inf");
        return v_;
    }
    /// The carrier double (+inf for the infinite member).
    Scalar raw() const { return v_; }

    friend BasicExtReal operator+(BasicExtReal a, BasicExtReal b) { return BasicExtReal(Raw{}, a.v_ + b.v_); }
    friend BasicExtReal operator+(BasicExtReal a, Scalar b) { return a + BasicExtReal(b); }
    BasicExtReal& operator+=(BasicExtReal o) { v_ += o.v_; return *this; }

    /// Nonnegative scaling. 0 * inf is taken as inf (the scaled function keeps
    /// its effective domain).
    friend BasicExtReal scale(Scalar t, BasicExtReal a) {
        if (t < 0) throw std::domain_error("ExtReal: negative scale");
        return a.is_inf() ? a : BasicExtReal(t * a.v_);
    }

    friend BasicExtReal min(BasicExtReal a, BasicExtReal b) { return a.v_ <= b.v_ ? a : b; }
    friend BasicExtReal max(BasicExtReal a, BasicExtReal b) { return a.v_ >= b.v_ ? a : b; }

    friend bool operator==(BasicExtReal a, BasicExtReal b) { return a.v_ == b.v_; }
    friend auto operator<=>(BasicExtReal a, BasicExtReal b) { return a.v_ <=> b.v_; }

    friend std::ostream& operator<<(std::ostream& os, BasicExtReal a) {
        if (a.is_inf()) return os << "inf";
        return os << a.v_;
    }

private:
    struct Raw {};
    constexpr BasicExtReal(Raw, Scalar v) : v_(v) {}
    Scalar v_ = 0;
};

using ExtReal = BasicExtReal<double>;

/// Value of <x,y> - phi for the sup-form objective. Returns -inf when phi is
/// +inf; a -inf never wins against any finite candidate.
template <typename Scalar>
inline Scalar affine_minus(Scalar inner, BasicExtReal<Scalar> phi) {
    return phi.is_inf() ? -std::numeric_limits<Scalar>::infinity() : inner - phi.raw();
}

/// exp(-phi) with exp(-inf) = 0.
template <typename Scalar>
inline Scalar exp_neg(BasicExtReal<Scalar> phi) {
    return phi.is_inf() ? Scalar(0) : std::exp(-phi.raw());
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::string to_string(ExtReal v) {
    if (v.is_inf()) return "inf";
    return std::to_string(v.raw());
}

}  // namespace logconc

#endif
