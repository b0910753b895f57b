#include <doctest.h>

#include <random>

#include "properties.hpp"
#include "rtm/cmc.hpp"

using namespace rtm;

namespace {
Rational q(const char* s) { return Rational::parse(s); }
}

// Smaller sample counts than the acceptance run; same checks.

TEST_CASE("enclosures contain the MPFR value")
{
    const props::Result r = props::enclosure_containment(5000, 11);
    INFO(r.first_violation);
    CHECK(r.ok());
}

TEST_CASE("grid rounding invariants")
{
    const props::Result r = props::grid_rounding(50000, 12);
    INFO(r.first_violation);
    CHECK(r.ok());
}

TEST_CASE("interval operations contain the point results")
{
    const props::Result r = props::interval_containment(20000, 13);
    INFO(r.first_violation);
    CHECK(r.ok());
}

TEST_CASE("rounded logistic runs stay within the error bound")
{
    const props::Result r = props::logistic_error_bound(q("1/100"), Rational::pow10(-10), Rational(1));
    INFO(r.first_violation);
    CHECK(r.ok());
    CHECK(r.samples == 102);
}

TEST_CASE("cmc Jacobian range contains central differences")
{
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<long> pick(0, 1000);
    const Box u2 = CmcConstants::published().u2();
    const Rational delta = Rational::pow10(-6);
    const auto req = PrecisionRequest::width(Rational::pow10(-30));
    for (int n = 0; n < 20; ++n) {
        RationalVector u;
        for (std::size_t i = 0; i < 3; ++i)
            u.push_back(u2[i].lo() + u2[i].width() * Rational(pick(rng)) / Rational(1000));
        const Box around{RationalInterval(u[0] - delta, u[0] + delta), RationalInterval(u[1] - delta, u[1] + delta),
                         RationalInterval(u[2] - delta, u[2] + delta)};
        const IntervalMatrix df = cmc_field()->jacobian_range(around);
        for (std::size_t j = 0; j < 3; ++j) {
            RationalVector up = u, down = u;
            up[j] += delta;
            down[j] -= delta;
            const IntervalVector fu = cmc_f_enclose(up, req), fd = cmc_f_enclose(down, req);
            for (std::size_t i = 0; i < 3; ++i) {
                const Rational diff = (fu[i].midpoint() - fd[i].midpoint()) / (delta * Rational(2));
                // Mean value theorem: the quotient is a Jacobian value inside the box.
                CHECK(RationalInterval(df[i][j].lo() - Rational::pow10(-20), df[i][j].hi() + Rational::pow10(-20))
                          .contains(diff));
            }
        }
    }
}

TEST_CASE("cmc f enclosures lie inside the range over U2")
{
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<long> pick(0, 1000);
    const Box u2 = CmcConstants::published().u2();
    const IntervalVector range = cmc_field()->f_range(u2);
    const CmcConstants c = CmcConstants::published();
    for (int n = 0; n < 200; ++n) {
        RationalVector u;
        for (std::size_t i = 0; i < 3; ++i)
            u.push_back(u2[i].lo() + u2[i].width() * Rational(pick(rng)) / Rational(1000));
        const IntervalVector f = cmc_f_enclose(u, PrecisionRequest::width(Rational::pow10(-20)));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(f[i].subset_of(range[i]));
            CHECK(f[i].mag() <= c.f_bounds[i]);
        }
    }
}
