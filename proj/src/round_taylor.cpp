#include "rtm/round_taylor.hpp"

#include <ostream>

namespace rtm {

namespace {

constexpr int kMaxLevel = 20;

const PrecisionRequest& bound_precision()
{
    static const PrecisionRequest req = PrecisionRequest::width(Rational::pow10(-20));
    return req;
}

}  // namespace

InitialValue InitialValue::parse(std::string_view text)
{
    std::string s(text);
    std::erase_if(s, [](char c) { return c == ' '; });
    const auto p = s.find("pi");
    if (p == std::string::npos)
        return exact(Rational::parse(s));

    std::string before = s.substr(0, p);
    std::string after = s.substr(p + 2);
    Rational coeff(1);
    if (!before.empty()) {
        if (before == "-")
            coeff = Rational(-1);
        else if (before == "+")
            coeff = Rational(1);
        else {
            if (before.back() == '*')
                before.pop_back();
            coeff = Rational::parse(before);
        }
    }
    if (!after.empty()) {
        if (after.front() != '/')
            throw std::invalid_argument("malformed pi multiple: '" + std::string(text) + "'");
        const Rational d = Rational::parse(after.substr(1));
        if (d.is_zero())
            throw std::invalid_argument("zero divisor in '" + std::string(text) + "'");
        coeff /= d;
    }
    return pi_multiple(coeff);
}

const Rational& InitialValue::exact_value() const
{
    if (pi_)
        throw std::logic_error("initial value " + str() + " is not an exact rational");
    return value_;
}

RationalInterval InitialValue::enclose(int level) const
{
    if (!pi_)
        return RationalInterval(value_);
    return RationalInterval(value_) * pi_at(level_bits(level));
}

std::string InitialValue::str() const { return pi_ ? "(" + value_.str() + ")*pi" : value_.str(); }

void RTMConfig::validate() const
{
    if (!field)
        throw ConfigError("no vector field");
    if (step.sign() <= 0)
        throw ConfigError("step h must be positive");
    if (steps < 0)
        throw ConfigError("step count k must be nonnegative");
    if (order < 1 || order > field->max_order())
        throw ConfigError("order " + std::to_string(order) + " not supported by " + std::string(field->name()));
    if (initial.size() != field->dimension())
        throw ConfigError("initial state has " + std::to_string(initial.size()) + " components, " +
                          std::string(field->name()) + " needs " + std::to_string(field->dimension()));
    if (!grid) {
        if (!field->exact_rational())
            throw ConfigError(std::string(field->name()) + " is transcendental; rounding cannot be disabled");
        for (const auto& v : initial)
            if (!v.is_exact())
                throw ConfigError("unrounded runs need exact rational initial values");
    }
}

RationalVector initial_point(const RTMConfig& cfg)
{
    RationalVector z;
    for (const auto& v : cfg.initial) {
        if (!cfg.grid) {
            z.push_back(v.exact_value());
            continue;
        }
        int level = 0;
        z.push_back(floor_of_enclosed(
            v.enclose(0), *cfg.grid,
            [&]() -> std::optional<RationalInterval> {
                if (++level > kMaxLevel)
                    return std::nullopt;
                return v.enclose(level);
            },
            kMaxLevel));
    }
    return z;
}

StepOutcome rtm_step_detailed(const RationalVector& z, const RTMConfig& cfg)
{
    const VectorField& field = *cfg.field;
    const Rational& h = cfg.step;

    if (field.exact_rational()) {
        const auto terms = field.taylor_terms(z, cfg.order);
        RationalVector y = z;
        Rational hp = h;
        for (int j = 0; j < cfg.order; ++j) {
            const Rational coeff = hp / factorial(static_cast<unsigned>(j + 1));
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] += terms[static_cast<std::size_t>(j)][i] * coeff;
            hp *= h;
        }
        if (cfg.grid)
            y = round_vector_to_grid(y, *cfg.grid);
        return {std::move(y), 0};
    }

    if (cfg.order != 1)
        throw ConfigError(std::string(field.name()) + " only provides first-order Taylor terms");
    if (!cfg.grid)
        throw ConfigError("transcendental fields need a rounding grid");

    // Per-level enclosures of y = z + f(z) h, computed lazily and shared by
    // all components.
    std::vector<std::optional<IntervalVector>> by_level(kMaxLevel + 1);
    std::vector<bool> computed(kMaxLevel + 1, false);
    auto y_at = [&](int level) -> const std::optional<IntervalVector>& {
        const auto l = static_cast<std::size_t>(level);
        if (!computed[l]) {
            computed[l] = true;
            if (auto f = field.enclose(z, level)) {
                IntervalVector y;
                y.reserve(z.size());
                for (std::size_t i = 0; i < z.size(); ++i)
                    y.push_back(RationalInterval(z[i]) + (*f)[i] * RationalInterval(h));
                by_level[l] = std::move(y);
            }
        }
        return by_level[l];
    };

    int first = 0;
    while (first <= kMaxLevel && !y_at(first))
        ++first;
    if (first > kMaxLevel)
        throw PoleProximity("vector field singular near the current iterate");

    StepOutcome out;
    out.z.reserve(z.size());
    int deepest = first;
    for (std::size_t i = 0; i < z.size(); ++i) {
        int level = first;
        out.z.push_back(floor_of_enclosed(
            (*y_at(first))[i], *cfg.grid,
            [&]() -> std::optional<RationalInterval> {
                while (++level <= kMaxLevel) {
                    if (const auto& y = y_at(level))
                        return (*y)[i];
                }
                return std::nullopt;
            },
            kMaxLevel));
        deepest = std::max(deepest, std::min(level, kMaxLevel));
    }
    out.refinements = deepest;
    return out;
}

Trajectory rtm_run(const RTMConfig& cfg, const RunChecks& checks)
{
    cfg.validate();
    Trajectory t;
    t.field = std::string(cfg.field->name());
    t.step = cfg.step;
    t.steps = cfg.steps;
    t.resolution = cfg.resolution();
    t.monotone.assign(cfg.field->dimension(), Monotonicity{});
    t.box_checked = checks.box.has_value();

    auto check_box = [&](long j, const RationalVector& z) {
        if (!checks.box || checks.box->contains(z))
            return;
        if (checks.box_hard)
            throw BoxViolation(j, "iterate " + std::to_string(j) + " left the admissible box");
        if (!t.first_box_exit)
            t.first_box_exit = j;
    };
    auto widen_hull = [&](const RationalVector& z) {
        if (t.hull.empty()) {
            for (const auto& c : z)
                t.hull.emplace_back(c);
            return;
        }
        for (std::size_t i = 0; i < z.size(); ++i)
            if (!t.hull[i].contains(z[i]))
                t.hull[i] = hull(t.hull[i], RationalInterval(z[i]));
    };

    auto check_size = [&](long j, const RationalVector& z) {
        for (const auto& c : z) {
            const auto& q = c.value();
            if (mpz_sizeinbase(q.get_num_mpz_t(), 2) > checks.max_exact_bits ||
                mpz_sizeinbase(q.get_den_mpz_t(), 2) > checks.max_exact_bits)
                throw std::overflow_error("unrounded iterate " + std::to_string(j) + " needs more than " +
                                          std::to_string(checks.max_exact_bits) + " bits");
        }
    };

    RationalVector z = initial_point(cfg);
    check_box(0, z);
    widen_hull(z);
    if (checks.on_step)
        checks.on_step(0, z);
    if (checks.keep_points) {
        t.points.reserve(static_cast<std::size_t>(cfg.steps) + 1);
        t.points.push_back(z);
    }

    for (long j = 1; j <= cfg.steps; ++j) {
        StepOutcome next = rtm_step_detailed(z, cfg);
        check_box(j, next.z);
        widen_hull(next.z);
        if (!cfg.grid)
            check_size(j, next.z);
        if (next.refinements > 0) {
            ++t.refined_steps;
            t.max_refinements = std::max(t.max_refinements, next.refinements);
        }
        if (checks.monotonicity) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                auto& m = t.monotone[i];
                if (!(z[i] < next.z[i])) {
                    if (m.strictly_increasing)
                        m.first_non_increase = j;
                    m.strictly_increasing = false;
                }
                if (!(next.z[i] < z[i]))
                    m.strictly_decreasing = false;
            }
        }
        z = std::move(next.z);
        if (checks.on_step)
            checks.on_step(j, z);
        if (checks.keep_points)
            t.points.push_back(z);
    }
    if (!checks.monotonicity)
        t.monotone.clear();
    t.final_point = std::move(z);
    return t;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << "step,t";
    const std::size_t n = traj.final_point.size();
    for (std::size_t i = 0; i < n; ++i)
        os << ",u" << i + 1;
    os << '\n';
    for (std::size_t j = 0; j < traj.points.size(); ++j) {
        os << j << ',' << (traj.step * Rational(static_cast<long>(j))).to_decimal(12);
        for (const auto& c : traj.points[j])
            os << ',' << c.str();
        os << '\n';
    }
}

Rational BoundSet::lipschitz(const Rational& h) const
{
    Rational l(0);
    Rational hp(1);
    for (std::size_t i = 0; i < k.size(); ++i) {
        l += k[i] * hp / factorial(static_cast<unsigned>(i + 1));
        hp *= h;
    }
    return l;
}

Rational BoundSet::m_upper() const
{
    Rational s(0);
    for (const auto& v : m)
        s += v * v;
    return sqrt_upper(s, Rational::pow10(-12));
}

ErrorBound compute_error_bound(const BoundSet& bounds, std::size_t dimension, int order, const Rational& h,
                               long steps, const Rational& resolution)
{
    if (h.sign() <= 0 || order < 1 || steps < 0 || resolution.sign() < 0)
        throw ConfigError("invalid parameters for the error bound");
    if (static_cast<int>(bounds.k.size()) < order)
        throw ConfigError("need K_0 .. K_{m-1} for the error bound");

    BoundSet b = bounds;
    b.k.resize(static_cast<std::size_t>(order));

    ErrorBound e;
    e.lipschitz = b.lipschitz(h);
    e.m_upper = b.m_upper();
    e.sqrt_n_upper = sqrt_upper(Rational(static_cast<long>(dimension)), Rational::pow10(-12));

    const Rational hm = pow(h, static_cast<unsigned>(order));
    const Rational fact = factorial(static_cast<unsigned>(order + 1));
    const Rational kh = h * Rational(steps);

    if (e.lipschitz.is_zero()) {
        // (e^{Lkh} - 1) / L -> kh as L -> 0.
        e.truncation_term = e.m_upper * hm / fact;
        e.rounding_term = e.sqrt_n_upper * resolution / h;
        e.growth = kh;
    } else {
        e.truncation_term = e.m_upper * hm / (e.lipschitz * fact);
        e.rounding_term = e.sqrt_n_upper * resolution / (e.lipschitz * h);
        e.growth = enclose_exp(e.lipschitz * kh, bound_precision()).hi() - Rational(1);
    }
    e.tilde_r = (e.truncation_term + e.rounding_term) * e.growth;
    e.hypothesis = check_greater("epsilon > M0 h + R~", b.epsilon, b.m0 * h + e.tilde_r);
    return e;
}

ErrorBound compute_error_bound(const BoundSet& bounds, const RTMConfig& cfg)
{
    return compute_error_bound(bounds, cfg.field->dimension(), cfg.order, cfg.step, cfg.steps, cfg.resolution());
}

}  // namespace rtm
