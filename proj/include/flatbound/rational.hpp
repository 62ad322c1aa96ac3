#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <type_traits>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flatbound {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
class Rational {
public:
    Rational() = default;
    template <std::integral T>
    Rational(T value)  // NOLINT(google-explicit-constructor)
        : value_(make_integer(value)) {}
    Rational(long numerator, long denominator);
    explicit Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

    /// Parses "a/b" or "a" with optional leading '-'. Decimal notation is
    /// rejected so that every input stays exact.
    static Rational parse(std::string_view text);

    const mpq_class& raw() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    int sign() const noexcept { return sgn(value_); }
    bool is_zero() const noexcept { return sign() == 0; }

    std::string str() const;
    double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    template <std::integral T>
    static mpq_class make_integer(T value) {
        if constexpr (std::is_signed_v<T>) {
            return mpq_class(static_cast<long>(value));
        } else {
            return mpq_class(static_cast<unsigned long>(value));
        }
    }

    mpq_class value_{0};
};

Rational abs(const Rational& r);

using Vec = std::vector<Rational>;

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
Vec ones(std::size_t n);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational sum(std::span<const Rational> a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rational& s, const Vec& a);
bool is_zero(std::span<const Rational> a);

/// Scales a nonzero vector by a positive factor so that its entries are
/// coprime integers. With `keep_sign` false the result is further flipped so
/// its first nonzero entry is positive, making it a canonical line direction.
Vec normalize_direction(const Vec& v, bool keep_sign = true);

/// Lexicographic comparison, used for deterministic ordering of points.
bool lex_less(const Vec& a, const Vec& b);

std::string to_string(const Vec& v);

/// Parses comma-separated rationals, e.g. "1/4,1/4,1/2".
Vec parse_csv(std::string_view text);

}  // namespace flatbound
