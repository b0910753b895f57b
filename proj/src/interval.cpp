#include "rtm/interval.hpp"

#include <algorithm>

namespace rtm {

RationalInterval::RationalInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (hi_ < lo_)
        throw std::invalid_argument("interval with lo > hi: [" + lo_.str() + ", " + hi_.str() + "]");
}

Rational RationalInterval::mag() const { return max(abs(lo_), abs(hi_)); }

Rational RationalInterval::mig() const
{
    if (contains_zero())
        return Rational(0);
    return min(abs(lo_), abs(hi_));
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b)
{
    return {a.lo() + b.lo(), a.hi() + b.hi()};
}

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b)
{
    return {a.lo() - b.hi(), a.hi() - b.lo()};
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b)
{
    // Sign-case shortcuts cover the common positive-times-positive path.
    if (a.lo().sign() >= 0 && b.lo().sign() >= 0)
        return {a.lo() * b.lo(), a.hi() * b.hi()};
    const std::array<Rational, 4> p{a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return {*mn, *mx};
}

RationalInterval operator/(const RationalInterval& a, const RationalInterval& b)
{
    if (b.contains_zero())
        throw DivisionByZeroInterval("interval division by [" + b.lo().str() + ", " + b.hi().str() + "]");
    const RationalInterval inv{Rational(1) / b.hi(), Rational(1) / b.lo()};
    return a * inv;
}

RationalInterval square(const RationalInterval& a)
{
    if (a.lo().sign() >= 0)
        return {a.lo() * a.lo(), a.hi() * a.hi()};
    if (a.hi().sign() <= 0)
        return {a.hi() * a.hi(), a.lo() * a.lo()};
    const Rational m = a.mag();
    return {Rational(0), m * m};
}

RationalInterval hull(const RationalInterval& a, const RationalInterval& b)
{
    return {min(a.lo(), b.lo()), max(a.hi(), b.hi())};
}

RationalInterval intersect(const RationalInterval& a, const RationalInterval& b)
{
    const Rational& lo = max(a.lo(), b.lo());
    const Rational& hi = min(a.hi(), b.hi());
    if (hi < lo)
        throw std::domain_error("disjoint intervals cannot be intersected");
    return {lo, hi};
}

RationalInterval round_out(const RationalInterval& a, unsigned bits)
{
    BigInt scale = 1;
    scale <<= bits;
    const Rational s(scale);
    return {Rational(floor(a.lo() * s), scale), Rational(ceil(a.hi() * s), scale)};
}

RationalInterval range_product_bound(std::span<const RationalInterval> factors, const Rational& scale)
{
    RationalInterval acc(scale);
    for (const auto& f : factors)
        acc = acc * f;
    return acc;
}

bool Box::contains(const RationalVector& u) const
{
    if (u.size() != axes_.size())
        return false;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!axes_[i].contains(u[i]))
            return false;
    return true;
}

Box Box::inflate(const Rational& eps) const
{
    std::vector<RationalInterval> out;
    out.reserve(axes_.size());
    for (const auto& a : axes_)
        out.emplace_back(a.lo() - eps, a.hi() + eps);
    return Box(std::move(out));
}

BoundMatrix::BoundMatrix(std::initializer_list<std::initializer_list<Rational>> rows) : n_(rows.size())
{
    entries_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_)
            throw std::invalid_argument("bound matrix must be square");
        for (const auto& v : row) {
            if (v.sign() < 0)
                throw std::invalid_argument("bound matrix entries must be nonnegative");
            entries_.push_back(v);
        }
    }
}

void BoundMatrix::set(std::size_t i, std::size_t j, Rational v)
{
    if (v.sign() < 0)
        throw std::invalid_argument("bound matrix entries must be nonnegative");
    entries_.at(i * n_ + j) = std::move(v);
}

Rational BoundMatrix::sum_of_squares() const
{
    Rational s(0);
    for (const auto& v : entries_)
        s += v * v;
    return s;
}

RationalVector BoundMatrix::apply(const RationalVector& v) const
{
    if (v.size() != n_)
        throw std::invalid_argument("bound matrix / vector dimension mismatch");
    RationalVector out(n_, Rational(0));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            out[i] += (*this)(i, j) * v[j];
    return out;
}

Rational frobenius_norm_bound(const BoundMatrix& m)
{
    return sqrt_upper(m.sum_of_squares(), Rational::pow10(-6));
}

}  // namespace rtm
