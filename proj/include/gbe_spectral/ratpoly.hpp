#pragma once

/**
 * @file ratpoly.hpp
 * @brief Exact rationals and dense univariate polynomials.
 *
 * `Polynomial<T>` stores coefficients lowest degree first with no trailing
 * zero; the zero polynomial has no coefficients and degree -1. Every moment
 * identity in moments.hpp is checked with `RationalPoly`, so equality there
 * is exact.
 */

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gbe {

using BigInt = boost::multiprecision::cpp_int;
/// Always in lowest terms with a positive denominator.
using BigRational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a plain decimal ("-0.125", "3.5e2") exactly.
namespace detail {

// Plain decimal digits only; a leading 0 is not an octal prefix.
inline std::optional<BigInt> parse_decimal_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    BigInt v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return negative ? BigInt(-v) : v;
}

}  // namespace detail

inline BigRational parse_rational(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = detail::parse_decimal_integer(text.substr(0, slash));
        const auto den = detail::parse_decimal_integer(text.substr(slash + 1));
        if (!num || !den || *den == 0) fail();
        return *den < 0 ? BigRational(BigInt(-*num), BigInt(-*den)) : BigRational(*num, *den);
    }
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        try {
            exponent = std::stol(std::string(text.substr(e + 1)));
        } catch (const std::exception&) {
            fail();
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            fail();
        }
    }
    if (digits.empty() || exponent > 4000 || exponent < -4000) fail();
    BigRational value{*detail::parse_decimal_integer(digits)};
    long shift = exponent - frac_digits;
    BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
    value = shift < 0 ? value / BigRational(ten_pow) : value * BigRational(ten_pow);
    return negative ? BigRational(-value) : value;
}

/// q^e by repeated squaring.
inline BigRational rational_pow(BigRational q, unsigned e) {
    BigRational r = 1;
    while (e != 0) {
        if (e & 1u) r *= q;
        q *= q;
        e >>= 1;
    }
    return r;
}

/// "num/den" form, denominator always written.
inline std::string to_fraction_string(const BigRational& q) {
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

template <class T>
class Polynomial {
public:
    using coefficient_type = T;

    Polynomial() = default;
    Polynomial(std::initializer_list<T> coefficients) : coeffs_(coefficients) { trim(); }
    explicit Polynomial(std::vector<T> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

    static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
    /// c0 + c1 x
    static Polynomial linear(const T& c0, const T& c1) { return Polynomial(std::vector<T>{c0, c1}); }

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    [[nodiscard]] const std::vector<T>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

    /// Coefficient of x^i; zero past the degree.
    [[nodiscard]] T operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(0); }

    [[nodiscard]] T leading_coefficient() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

    friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.coeffs_ == q.coeffs_; }

    Polynomial& operator+=(const Polynomial& q) {
        if (q.coeffs_.size() > coeffs_.size()) coeffs_.resize(q.coeffs_.size(), T(0));
        for (std::size_t i = 0; i < q.coeffs_.size(); ++i) coeffs_[i] += q.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& q) {
        if (q.coeffs_.size() > coeffs_.size()) coeffs_.resize(q.coeffs_.size(), T(0));
        for (std::size_t i = 0; i < q.coeffs_.size(); ++i) coeffs_[i] -= q.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator*=(const T& c) {
        for (auto& a : coeffs_) a *= c;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator-(Polynomial p) {
        for (auto& a : p.coeffs_) a = -a;
        return p;
    }
    friend Polynomial operator*(Polynomial p, const T& c) { return p *= c; }
    friend Polynomial operator*(const T& c, Polynomial p) { return p *= c; }

    /// Cauchy product.
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero()) return {};
        std::vector<T> out(p.coeffs_.size() + q.coeffs_.size() - 1, T(0));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
        return Polynomial(std::move(out));
    }
    Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

using RationalPoly = Polynomial<BigRational>;

/// Horner evaluation. Exact for rational x; a double x gives a double.
template <class T, class X>
auto evaluate(const Polynomial<T>& p, const X& x) {
    if constexpr (std::is_floating_point_v<X>) {
        X acc = 0;
        for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it)
            acc = acc * x + static_cast<X>(*it);
        return acc;
    } else {
        T acc(0);
        for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) acc = acc * T(x) + *it;
        return acc;
    }
}

/// q(x) = p(x + c), by repeated synthetic division. O(deg^2).
template <class T>
Polynomial<T> shift(const Polynomial<T>& p, const T& c) {
    std::vector<T> a = p.coefficients();
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) a[j] += c * a[j + 1];
    return Polynomial<T>(std::move(a));
}

/// q(x) = p(s x).
template <class T>
Polynomial<T> scale_argument(const Polynomial<T>& p, const T& s) {
    std::vector<T> a = p.coefficients();
    T power(1);
    for (auto& coeff : a) {
        coeff *= power;
        power *= s;
    }
    return Polynomial<T>(std::move(a));
}

template <class T>
Polynomial<T> pow(const Polynomial<T>& p, unsigned e) {
    Polynomial<T> out = Polynomial<T>::constant(T(1));
    for (unsigned i = 0; i < e; ++i) out *= p;
    return out;
}

/// Human-readable form, highest degree first: "2*a^2 + 5*a + 3".
template <class T>
std::string to_string(const Polynomial<T>& p, std::string_view var = "x") {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        T c = p[static_cast<std::size_t>(k)];
        if (c == T(0)) continue;
        bool negative = c < T(0);
        if (negative) c = -c;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        if (k == 0 || c != T(1)) {
            os << c;
            if (k > 0) os << '*';
        }
        if (k >= 1) os << var;
        if (k >= 2) os << '^' << k;
    }
    return os.str();
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Polynomial<T>& p) {
    return os << to_string(p);
}

}  // namespace gbe
