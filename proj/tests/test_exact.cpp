#include <doctest.h>

#include <stdexcept>

#include "rtm/grid.hpp"
#include "rtm/inequality.hpp"
#include "rtm/interval.hpp"

using namespace rtm;

namespace {
Rational q(const char* s) { return Rational::parse(s); }
}

TEST_CASE("rational parsing keeps decimals exact")
{
    CHECK(q("0.3966") == Rational(BigInt(1983), BigInt(5000)));
    CHECK(q("-1.5e-3") == Rational(BigInt(-3), BigInt(2000)));
    CHECK(q("6/4").str() == "3/2");
    CHECK(q("7").str() == "7/1");
    CHECK(q("2.5E2") == Rational(250));
    CHECK(q("-0") == Rational(0));
    CHECK_THROWS_AS(q("abc"), std::invalid_argument);
    CHECK_THROWS_AS(q("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(q(""), std::invalid_argument);
}

TEST_CASE("rational arithmetic and ordering")
{
    CHECK(q("1/3") + q("1/6") == q("1/2"));
    CHECK(q("1/3") * q("3/7") == q("1/7"));
    CHECK(q("1/3") - q("1/2") == q("-1/6"));
    CHECK(q("1/3") / q("2/9") == q("3/2"));
    CHECK_THROWS(q("1") / Rational(0));
    CHECK(q("-1/3") < q("-1/4"));
    CHECK(Rational::pow10(-3) == q("0.001"));
    CHECK(Rational::pow10(4) == Rational(10000));
    CHECK(pow(q("-2/3"), 3) == q("-8/27"));
    CHECK(abs(q("-5/2")) == q("5/2"));
}

TEST_CASE("floor and ceil round toward the right infinities")
{
    CHECK(floor(q("7/2")) == 3);
    CHECK(floor(q("-7/2")) == -4);
    CHECK(ceil(q("-7/2")) == -3);
    CHECK(ceil(q("7/2")) == 4);
    CHECK(floor(Rational(5)) == 5);
    CHECK(ceil(Rational(-5)) == -5);
}

TEST_CASE("decimal preview truncates toward zero")
{
    CHECK(q("2/3").to_decimal(4) == "0.6666");
    CHECK(q("-2/3").to_decimal(4) == "-0.6666");
    CHECK(q("1/8").to_decimal(2) == "0.12");
    CHECK(q("15681944331/10000000000").to_decimal(10) == "1.5681944331");
}

TEST_CASE("sqrt_upper brackets the root from above within the slack")
{
    const Rational s = sqrt_upper(q("286.9361"), Rational::pow10(-12));
    CHECK(s * s >= q("286.9361"));
    CHECK(s - q("16.93918829224116039668207") < Rational::pow10(-12));
    CHECK(s - q("16.93918829224116039668207") > Rational(0));
    const Rational t = sqrt_upper(Rational(4), Rational::pow10(-9));
    CHECK(t >= Rational(2));
    CHECK(t - Rational(2) <= Rational::pow10(-9));
    CHECK(sqrt_upper(Rational(0), Rational::pow10(-6)) <= Rational::pow10(-6));
}

TEST_CASE("factorial")
{
    CHECK(factorial(0) == Rational(1));
    CHECK(factorial(5) == Rational(120));
    CHECK(factorial(20) == Rational(BigInt("2432902008176640000")));
}

TEST_CASE("grid rounding goes toward minus infinity")
{
    const GridSpec g = GridSpec::decimal(10);
    CHECK(round_to_grid(q("-1/3"), g) == q("-3333333334/10000000000"));
    CHECK(round_to_grid(q("1/3"), g) == q("3333333333/10000000000"));
    CHECK(round_to_grid(q("0.25"), g) == q("0.25"));
    CHECK(grid_index(q("-1/3"), g) == -3333333334);
    CHECK(on_grid(q("0.1234567891"), g));
    CHECK_FALSE(on_grid(q("0.12345678912"), g));
    CHECK(round_to_grid(q("7/2"), GridSpec(Rational(2))) == Rational(2));
    CHECK_THROWS_AS(GridSpec(Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(q("-1/10")), std::invalid_argument);
    const auto v = round_vector_to_grid({q("1/3"), q("-1/3")}, GridSpec::decimal(2));
    CHECK(v == RationalVector{q("0.33"), q("-0.34")});
}

TEST_CASE("interval arithmetic")
{
    const RationalInterval a(q("-1"), q("0.0018"));
    const RationalInterval b(q("1"), q("1.033"));
    CHECK(a * b == RationalInterval(q("-1.033"), q("0.0018594")));
    CHECK(a + b == RationalInterval(Rational(0), q("1.0348")));
    CHECK(a - b == RationalInterval(q("-2.033"), q("-0.9982")));
    CHECK(RationalInterval(Rational(1)) / b == RationalInterval(Rational(1) / q("1.033"), Rational(1)));
    CHECK_THROWS_AS(b / a, DivisionByZeroInterval);
    CHECK(square(a) == RationalInterval(Rational(0), Rational(1)));
    CHECK(square(RationalInterval(q("-3"), q("-2"))) == RationalInterval(Rational(4), Rational(9)));
    CHECK(a.mag() == Rational(1));
    CHECK(a.mig() == Rational(0));
    CHECK(b.mig() == Rational(1));
    CHECK(hull(a, b) == RationalInterval(Rational(-1), q("1.033")));
    CHECK_THROWS_AS(intersect(a, b), std::domain_error);
    CHECK(intersect(a, RationalInterval(Rational(0), Rational(5))) == RationalInterval(Rational(0), q("0.0018")));
    CHECK_THROWS_AS(RationalInterval(Rational(1), Rational(0)), std::invalid_argument);
    CHECK(-a == RationalInterval(q("-0.0018"), Rational(1)));
}

TEST_CASE("round_out widens to dyadic endpoints")
{
    const RationalInterval v(q("1/3"), q("2/3"));
    const RationalInterval w = round_out(v, 8);
    CHECK(v.subset_of(w));
    CHECK(w.width() - v.width() <= Rational(BigInt(2), BigInt(256)));
    CHECK(w.lo().denominator() == 256);
}

TEST_CASE("range_product_bound")
{
    const RationalInterval f[] = {RationalInterval(q("-1"), q("2")), RationalInterval(q("3"), q("4"))};
    CHECK(range_product_bound(f, Rational(2)) == RationalInterval(Rational(-8), Rational(16)));
}

TEST_CASE("boxes")
{
    const Box b{RationalInterval(Rational(0), Rational(1)), RationalInterval(Rational(2), Rational(3))};
    CHECK(b.contains({q("1/2"), q("5/2")}));
    CHECK_FALSE(b.contains({q("1/2"), q("7/2")}));
    const Box w = b.inflate(q("1/10"));
    CHECK(w[0] == RationalInterval(q("-1/10"), q("11/10")));
    CHECK(w[1] == RationalInterval(q("19/10"), q("31/10")));
}

TEST_CASE("bound matrices and the Frobenius bound")
{
    const BoundMatrix n{{Rational(3), Rational(4)}, {Rational(0), Rational(0)}};
    CHECK(n.sum_of_squares() == Rational(25));
    const Rational k = frobenius_norm_bound(n);
    CHECK(k >= Rational(5));
    CHECK(k - Rational(5) <= Rational::pow10(-6));
    CHECK(n.apply({Rational(1), Rational(2)}) == RationalVector{Rational(11), Rational(0)});
    CHECK_THROWS_AS((BoundMatrix{{Rational(-1)}}), std::invalid_argument);
    CHECK_THROWS_AS((BoundMatrix{{Rational(1), Rational(2)}}), std::invalid_argument);
}

TEST_CASE("inequalities report slack")
{
    CHECK(check_less("a", Rational(1), Rational(3)).slack() == Rational(2));
    CHECK(check_less("a", Rational(3), Rational(3)).holds() == false);
    CHECK(check_less_equal("a", Rational(3), Rational(3)).holds());
    CHECK(check_greater("a", Rational(5), Rational(3)).slack() == Rational(2));
    CHECK(check_greater_equal("a", Rational(2), Rational(3)).holds() == false);
    CHECK(check_equal("a", Rational(2), Rational(3)).slack() == Rational(-1));
    CHECK(check_equal("a", Rational(3), Rational(3)).holds());
}
