#pragma once

// Autonomous vector fields Y' = f(Y) as consumed by the Round Taylor
// stepper and by the bound verification code.

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtm/interval.hpp"

namespace rtm {

using IntervalVector = std::vector<RationalInterval>;
using IntervalMatrix = std::vector<IntervalVector>;

class VectorField {
public:
    virtual ~VectorField() = default;

    virtual std::string_view name() const = 0;
    virtual std::size_t dimension() const = 0;

    /// True when f is polynomial with rational coefficients and can be
    /// evaluated exactly.
    virtual bool exact_rational() const = 0;

    /// Highest Taylor order m the field can drive: terms f, F_1 ... F_{m-1}.
    virtual int max_order() const { return 1; }

    /// Enclosure of f(u) at refinement level `level`, or nullopt when the
    /// point is not yet separated from a singularity at that level.
    virtual std::optional<IntervalVector> enclose(const RationalVector& u, int level) const = 0;

    /// Exact [f, F_1, ..., F_{m-1}] at u. Only for exact_rational fields.
    virtual std::vector<RationalVector> taylor_terms(const RationalVector& u, int m) const;

    /// Ranges over a box: f, Df (row i = d f_i / d u_j) and F_1 = Df f.
    virtual IntervalVector f_range(const Box& box) const = 0;
    virtual IntervalMatrix jacobian_range(const Box& box) const = 0;
    virtual IntervalVector f1_range(const Box& box) const;
};

using FieldPtr = std::shared_ptr<const VectorField>;

/// Univariate polynomial with exact rational coefficients (c[0] + c[1] y + ...).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    const std::vector<Rational>& coefficients() const { return c_; }
    Rational operator()(const Rational& y) const;
    RationalInterval operator()(const RationalInterval& y) const;
    Polynomial derivative() const;
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    void trim();
    std::vector<Rational> c_;
};

/// Scalar field y' = p(y) with a polynomial right-hand side; exact, with
/// Taylor terms of any order.
class PolynomialField : public VectorField {
public:
    PolynomialField(std::string name, Polynomial p);

    std::string_view name() const override { return name_; }
    std::size_t dimension() const override { return 1; }
    bool exact_rational() const override { return true; }
    int max_order() const override { return 64; }
    std::optional<IntervalVector> enclose(const RationalVector& u, int level) const override;
    std::vector<RationalVector> taylor_terms(const RationalVector& u, int m) const override;
    IntervalVector f_range(const Box& box) const override;
    IntervalMatrix jacobian_range(const Box& box) const override;

    const Polynomial& rhs() const { return p_; }

private:
    const Polynomial& tower(int j) const;

    std::string name_;
    Polynomial p_;
    mutable std::mutex tower_mu_;
    mutable std::deque<Polynomial> tower_;
};

/// f = 0 in n dimensions.
class ZeroField : public VectorField {
public:
    explicit ZeroField(std::size_t n) : n_(n) {}
    std::string_view name() const override { return "zero"; }
    std::size_t dimension() const override { return n_; }
    bool exact_rational() const override { return true; }
    int max_order() const override { return 64; }
    std::optional<IntervalVector> enclose(const RationalVector& u, int level) const override;
    std::vector<RationalVector> taylor_terms(const RationalVector& u, int m) const override;
    IntervalVector f_range(const Box& box) const override;
    IntervalMatrix jacobian_range(const Box& box) const override;

private:
    std::size_t n_;
};

/// y' = y - y^2/3, the classic growth of unrounded Euler denominators.
FieldPtr logistic_demo_field();

/// Registry lookup: "cmc-s4", "logistic-demo", "zero". Throws
/// std::invalid_argument on unknown names.
FieldPtr make_field(std::string_view name);
std::vector<std::string> field_names();

}  // namespace rtm
