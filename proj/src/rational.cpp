#include <nashforge/rational.hpp>

#include <nashforge/error.hpp>

#include <ostream>

namespace nashforge {

Rational::Rational(long num, long den) : value_(num, den) {
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) {
    if (value_.get_den() == 0)
        throw std::domain_error("rational with zero denominator");
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    auto is_int = [](std::string_view s, bool allow_sign) {
        if (s.empty())
            return false;
        std::size_t i = 0;
        if (allow_sign && s[0] == '-')
            i = 1;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_int(num, true) || !is_int(den, false))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const {
    if (value_.get_den() == 1)
        return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

std::size_t Rational::bit_size() const {
    auto bits = [](const mpz_class& z) -> std::size_t {
        if (z == 0)
            return 1;
        return mpz_sizeinbase(z.get_mpz_t(), 2);
    };
    return bits(value_.get_num()) + bits(value_.get_den());
}

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero())
        throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    if (c < 0)
        return std::strong_ordering::less;
    if (c > 0)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational from_integer(const mpz_class& z) { return Rational(mpq_class(z)); }

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

Rational pow2(unsigned e) {
    mpz_class z = 1;
    z <<= e;
    return from_integer(z);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace nashforge
