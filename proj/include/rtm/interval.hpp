#pragma once

// Closed intervals with exact rational endpoints, axis-aligned boxes, and
// nonnegative bound matrices.
//
// Endpoint arithmetic is exact, so no outward rounding is needed: the result
// of every operation contains { a o b : a in A, b in B } by construction.

#include <array>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rtm/rational.hpp"

namespace rtm {

struct DivisionByZeroInterval : std::domain_error {
    using std::domain_error::domain_error;
};

class RationalInterval {
public:
    RationalInterval() = default;
    RationalInterval(Rational point) : lo_(point), hi_(std::move(point)) {}
    /// Throws std::invalid_argument if lo > hi.
    RationalInterval(Rational lo, Rational hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    /// max |x| over the interval.
    Rational mag() const;
    /// min |x| over the interval.
    Rational mig() const;

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool subset_of(const RationalInterval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
    bool is_point() const { return lo_ == hi_; }
    bool positive() const { return lo_.sign() > 0; }
    bool negative() const { return hi_.sign() < 0; }

    RationalInterval operator-() const { return {-hi_, -lo_}; }

    friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
    friend std::ostream& operator<<(std::ostream& os, const RationalInterval& v)
    {
        return os << '[' << v.lo_ << ", " << v.hi_ << ']';
    }

private:
    Rational lo_;
    Rational hi_;
};

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
/// Throws DivisionByZeroInterval if b contains 0.
RationalInterval operator/(const RationalInterval& a, const RationalInterval& b);

inline RationalInterval interval_add(const RationalInterval& a, const RationalInterval& b) { return a + b; }
inline RationalInterval interval_sub(const RationalInterval& a, const RationalInterval& b) { return a - b; }
inline RationalInterval interval_mul(const RationalInterval& a, const RationalInterval& b) { return a * b; }
inline RationalInterval interval_div(const RationalInterval& a, const RationalInterval& b) { return a / b; }

RationalInterval square(const RationalInterval& a);
RationalInterval hull(const RationalInterval& a, const RationalInterval& b);
/// Throws std::domain_error when the intervals are disjoint.
RationalInterval intersect(const RationalInterval& a, const RationalInterval& b);

/// Widens outward to endpoints with denominator 2^bits. Keeps operands
/// small in long chains without ever losing containment.
RationalInterval round_out(const RationalInterval& a, unsigned bits);

/// Range of scale * prod(factors), each factor ranging over its interval.
RationalInterval range_product_bound(std::span<const RationalInterval> factors, const Rational& scale);

class Box {
public:
    Box() = default;
    explicit Box(std::vector<RationalInterval> axes) : axes_(std::move(axes)) {}
    Box(std::initializer_list<RationalInterval> axes) : axes_(axes) {}

    std::size_t dimension() const { return axes_.size(); }
    const RationalInterval& operator[](std::size_t i) const { return axes_.at(i); }
    RationalInterval& operator[](std::size_t i) { return axes_.at(i); }
    const std::vector<RationalInterval>& axes() const { return axes_; }

    bool contains(const RationalVector& u) const;
    /// The box with every axis widened by eps on both sides.
    Box inflate(const Rational& eps) const;

private:
    std::vector<RationalInterval> axes_;
};

/// n x n matrix of nonnegative entries (row-major).
class BoundMatrix {
public:
    explicit BoundMatrix(std::size_t n) : n_(n), entries_(n * n, Rational(0)) {}
    /// Throws std::invalid_argument on a non-square list or negative entry.
    BoundMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    std::size_t size() const { return n_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }
    void set(std::size_t i, std::size_t j, Rational v);

    /// Sum of squared entries (exact).
    Rational sum_of_squares() const;
    /// Matrix-vector product with a nonnegative vector.
    RationalVector apply(const RationalVector& v) const;

private:
    std::size_t n_;
    std::vector<Rational> entries_;
};

/// Rational q with q^2 >= sum b_ij^2 and q - sqrt(sum) <= 10^-6.
Rational frobenius_norm_bound(const BoundMatrix& m);

}  // namespace rtm
