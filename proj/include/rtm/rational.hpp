#pragma once

// Exact rational numbers on top of GMP.
//
// Every value is kept in canonical form: the denominator is positive and
// coprime to the numerator. Nothing in this header ever rounds.

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace rtm {

using BigInt = mpz_class;

class Rational {
public:
    Rational() = default;
    Rational(int v) : q_(v) {}
    Rational(long v) : q_(v) {}
    Rational(long long v) : q_(BigInt(std::to_string(v))) {}
    Rational(const BigInt& v) : q_(v) {}
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Accepts "num/den", integers, and decimal literals with an optional
    /// exponent ("0.3966", "-1.5e-3"). Decimals are read exactly.
    static Rational parse(std::string_view text);

    /// 10^e for any integer e.
    static Rational pow10(int e);

    const mpq_class& value() const { return q_; }
    BigInt numerator() const { return q_.get_num(); }
    BigInt denominator() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    /// "num/den" in base 10, always with an explicit denominator.
    std::string str() const;

    /// Decimal expansion truncated toward zero after `digits` fractional
    /// digits. Not exact; callers must label it.
    std::string to_decimal(int digits) const;

    /// Nearest double. Only for non-rigorous output.
    double to_double() const { return q_.get_d(); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_;
};

using RationalVector = std::vector<Rational>;

/// Largest integer not exceeding x (rounds toward -infinity).
BigInt floor(const Rational& x);
/// Smallest integer not below x.
BigInt ceil(const Rational& x);

Rational abs(const Rational& x);
Rational pow(const Rational& x, unsigned e);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

/// Rational upper bound q >= sqrt(x) with q - sqrt(x) <= slack, found by
/// bisection. x >= 0, slack > 0.
Rational sqrt_upper(const Rational& x, const Rational& slack);

/// Integer factorial as a rational.
Rational factorial(unsigned n);

}  // namespace rtm
