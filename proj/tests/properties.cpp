#include "properties.hpp"

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "rtm/enclosure.hpp"
#include "rtm/round_taylor.hpp"

namespace props {

namespace {

using rtm::BigInt;
using rtm::Rational;
using rtm::RationalInterval;

Rational random_rational(std::mt19937_64& rng, long magnitude, int max_digits)
{
    const int d = std::uniform_int_distribution<int>(0, max_digits)(rng);
    long scale = 1;
    for (int i = 0; i < d; ++i)
        scale *= 10;
    std::uniform_int_distribution<long> num(-magnitude * scale, magnitude * scale);
    return Rational(BigInt(num(rng)), BigInt(scale));
}

void record(Result& r, bool ok, const std::string& what)
{
    ++r.samples;
    if (ok)
        return;
    if (r.violations++ == 0)
        r.first_violation = what;
}

}  // namespace

Result enclosure_containment(long n, unsigned seed)
{
    Result r{"enclosure containment vs MPFR", 0, 0, {}};
    std::mt19937_64 rng(seed);
    const auto req = rtm::PrecisionRequest::width(Rational::pow10(-25));
    static const oracle::Fn fns[] = {oracle::Fn::Sin, oracle::Fn::Cos, oracle::Fn::Cot, oracle::Fn::Csc,
                                     oracle::Fn::Exp};
    static const char* names[] = {"sin", "cos", "cot", "csc", "exp"};
    for (long i = 0; i < n; ++i) {
        const int k = static_cast<int>(i % 5);
        const Rational x = random_rational(rng, k == 4 ? 40 : 50, 12);
        const RationalInterval ref = oracle::eval(fns[k], x);
        if ((k == 2 || k == 3) && oracle::eval(oracle::Fn::Sin, x).mag() < Rational::pow10(-6)) {
            --i;
            continue;
        }
        RationalInterval got;
        switch (k) {
        case 0: got = rtm::enclose_sin(x, req); break;
        case 1: got = rtm::enclose_cos(x, req); break;
        case 2: got = rtm::enclose_cot(x, req); break;
        case 3: got = rtm::enclose_csc(x, req); break;
        default: got = rtm::enclose_exp(x, req); break;
        }
        std::ostringstream os;
        os << names[k] << "(" << x << "): got " << got << ", oracle " << ref;
        record(r, ref.subset_of(got), os.str());
    }
    return r;
}

Result grid_rounding(long n, unsigned seed)
{
    Result r{"grid rounding", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> res_digits(1, 12);
    for (long i = 0; i < n; ++i) {
        const rtm::GridSpec grid = rtm::GridSpec::decimal(res_digits(rng));
        const Rational y = random_rational(rng, 1000, 15);
        const Rational z = rtm::round_to_grid(y, grid);
        const Rational d = y - z;
        const bool ok = rtm::on_grid(z, grid) && d.sign() >= 0 && d < grid.resolution() &&
                        rtm::round_to_grid(z, grid) == z;
        record(r, ok, "y = " + y.str() + " -> " + z.str());
    }
    return r;
}

Result logistic_error_bound(const Rational& h, const Rational& resolution, const Rational& horizon)
{
    Result r{"logistic Euler within R~ (h = " + h.str() + ", R = " + resolution.str() + ")", 0, 0, {}};
    const rtm::FieldPtr field = rtm::logistic_demo_field();
    const long k = rtm::floor(horizon / h).get_si();

    // U1 holds the exact solution on [0, 1] (from 1/2 up to 1.0567); the run
    // fails hard if an iterate leaves it.
    const rtm::Box u1{RationalInterval(Rational::parse("1/2"), Rational::parse("11/10"))};
    const Rational eps = Rational::parse("1/20");
    const rtm::Box u2 = u1.inflate(eps);
    const rtm::BoundSet bounds{field->f_range(u2)[0].mag(),
                               {field->f1_range(u2)[0].mag()},
                               {field->jacobian_range(u2)[0][0].mag()},
                               eps};
    const rtm::ErrorBound e = rtm::compute_error_bound(bounds, 1, 1, h, k, resolution);
    record(r, e.hypothesis_holds(), "hypothesis epsilon > M0 h + R~ fails");

    rtm::RTMConfig cfg;
    cfg.field = field;
    cfg.step = h;
    cfg.steps = k;
    cfg.grid = rtm::GridSpec(resolution);
    cfg.initial = {rtm::InitialValue::exact(Rational::parse("1/2"))};
    rtm::RunChecks checks;
    checks.box = u1;
    checks.keep_points = true;
    const rtm::Trajectory tr = rtm::rtm_run(cfg, checks);

    const auto req = rtm::PrecisionRequest::width(Rational::pow10(-30));
    for (long j = 0; j <= k; ++j) {
        const RationalInterval decay = rtm::enclose_exp(-(h * Rational(j)), req);
        const RationalInterval y = RationalInterval(Rational(3)) /
                                   (RationalInterval(Rational(1)) + RationalInterval(Rational(5)) * decay);
        const Rational& z = tr.points[static_cast<std::size_t>(j)][0];
        const Rational dist = max(abs(z - y.lo()), abs(z - y.hi()));
        record(r, dist <= e.tilde_r,
               "step " + std::to_string(j) + ": |z - y| <= " + dist.to_decimal(15) + " > R~ = " + e.tilde_r.to_decimal(15));
    }
    return r;
}

Result interval_containment(long n, unsigned seed)
{
    Result r{"interval arithmetic containment", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> frac(0, 1000);
    auto interval = [&] {
        const Rational a = random_rational(rng, 10, 6), b = random_rational(rng, 10, 6);
        return a < b ? RationalInterval(a, b) : RationalInterval(b, a);
    };
    auto inside = [&](const RationalInterval& v) { return v.lo() + v.width() * Rational(frac(rng)) / Rational(1000); };
    for (long i = 0; i < n; ++i) {
        const RationalInterval A = interval(), B = interval();
        const Rational a = inside(A), b = inside(B);
        const int op = static_cast<int>(i % 4);
        bool ok = true;
        switch (op) {
        case 0: ok = (A + B).contains(a + b); break;
        case 1: ok = (A - B).contains(a - b); break;
        case 2: ok = (A * B).contains(a * b); break;
        default:
            if (B.contains_zero()) {
                --i;
                continue;
            }
            ok = (A / B).contains(a / b);
            break;
        }
        std::ostringstream os;
        os << "op " << op << " on " << A << ", " << B;
        record(r, ok, os.str());
    }
    return r;
}

}  // namespace props
