#include "rtm/vector_field.hpp"

#include <stdexcept>

#include "rtm/cmc.hpp"

namespace rtm {

std::vector<RationalVector> VectorField::taylor_terms(const RationalVector&, int) const
{
    throw std::logic_error(std::string(name()) + " has no exact Taylor terms");
}

IntervalVector VectorField::f1_range(const Box& box) const
{
    const IntervalVector f = f_range(box);
    const IntervalMatrix df = jacobian_range(box);
    IntervalVector out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        RationalInterval acc(Rational(0));
        for (std::size_t j = 0; j < f.size(); ++j)
            acc = acc + df[i][j] * f[j];
        out.push_back(acc);
    }
    return out;
}

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim()
{
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

Rational Polynomial::operator()(const Rational& y) const
{
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * y + *it;
    return acc;
}

RationalInterval Polynomial::operator()(const RationalInterval& y) const
{
    // Power form: each monomial's range is exact, the sum is an enclosure.
    RationalInterval acc(Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero())
            continue;
        RationalInterval mono(Rational(1));
        if (k > 0) {
            // y^k: exact range, minding even powers across zero.
            const Rational a = pow(y.lo(), static_cast<unsigned>(k));
            const Rational b = pow(y.hi(), static_cast<unsigned>(k));
            if (k % 2 == 0 && y.contains_zero())
                mono = RationalInterval(Rational(0), max(a, b));
            else
                mono = RationalInterval(min(a, b), max(a, b));
        }
        acc = acc + RationalInterval(c_[k]) * mono;
    }
    return acc;
}

Polynomial Polynomial::derivative() const
{
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k)
        d.push_back(c_[k] * Rational(static_cast<long>(k)));
    return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.c_.empty() || b.c_.empty())
        return Polynomial();
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
}

PolynomialField::PolynomialField(std::string name, Polynomial p) : name_(std::move(name)), p_(std::move(p))
{
    tower_.push_back(p_);
}

const Polynomial& PolynomialField::tower(int j) const
{
    // F_j = F_{j-1}' f
    std::lock_guard lock(tower_mu_);
    while (static_cast<int>(tower_.size()) <= j)
        tower_.push_back(tower_.back().derivative() * p_);
    return tower_[static_cast<std::size_t>(j)];
}

std::optional<IntervalVector> PolynomialField::enclose(const RationalVector& u, int) const
{
    return IntervalVector{RationalInterval(p_(u.at(0)))};
}

std::vector<RationalVector> PolynomialField::taylor_terms(const RationalVector& u, int m) const
{
    std::vector<RationalVector> out;
    for (int j = 0; j < m; ++j)
        out.push_back({tower(j)(u.at(0))});
    return out;
}

IntervalVector PolynomialField::f_range(const Box& box) const { return {p_(box[0])}; }

IntervalMatrix PolynomialField::jacobian_range(const Box& box) const
{
    return {{p_.derivative()(box[0])}};
}

std::optional<IntervalVector> ZeroField::enclose(const RationalVector&, int) const
{
    return IntervalVector(n_, RationalInterval(Rational(0)));
}

std::vector<RationalVector> ZeroField::taylor_terms(const RationalVector&, int m) const
{
    return std::vector<RationalVector>(static_cast<std::size_t>(m), RationalVector(n_, Rational(0)));
}

IntervalVector ZeroField::f_range(const Box&) const { return IntervalVector(n_, RationalInterval(Rational(0))); }

IntervalMatrix ZeroField::jacobian_range(const Box&) const
{
    return IntervalMatrix(n_, IntervalVector(n_, RationalInterval(Rational(0))));
}

FieldPtr logistic_demo_field()
{
    static const FieldPtr field = std::make_shared<PolynomialField>(
        "logistic-demo", Polynomial({Rational(0), Rational(1), Rational(BigInt(-1), BigInt(3))}));
    return field;
}

FieldPtr make_field(std::string_view name)
{
    if (name == "cmc-s4")
        return cmc_field();
    if (name == "logistic-demo")
        return logistic_demo_field();
    if (name == "zero")
        return std::make_shared<ZeroField>(3);
    throw std::invalid_argument("unknown vector field '" + std::string(name) + "'");
}

std::vector<std::string> field_names() { return {"cmc-s4", "logistic-demo", "zero"}; }

}  // namespace rtm
