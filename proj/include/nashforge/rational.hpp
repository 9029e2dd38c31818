#ifndef NASHFORGE_RATIONAL_HPP
#define NASHFORGE_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nashforge {

/// Arbitrary-precision rational kept in lowest terms with a positive
/// denominator. Every operation is exact.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}
    Rational(int value) : value_(static_cast<long>(value)) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& value);

    /// Parses "p/q" or "p" (optional leading '-'). Throws ParseError.
    static Rational parse(std::string_view text);

    /// "p/q", with "/q" omitted when q == 1.
    std::string str() const;

    const mpq_class& raw() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    /// Largest integer not exceeding the value.
    mpz_class floor() const;
    Rational abs() const;

    /// Bits of |numerator| plus bits of the denominator (0 counts as one bit).
    std::size_t bit_size() const;

    double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    mpq_class value_;
};

Rational from_integer(const mpz_class& z);
Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);
/// 2^e for e >= 0.
Rational pow2(unsigned e);

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace nashforge

#endif
