#include "rtm/range.hpp"

namespace rtm {

namespace {

constexpr long kMaxCriticalPoints = 1 << 20;

// Critical points offset*pi + j*pi (j integer) that may lie in the domain,
// reported as the j values. A point whose enclosure merely touches the
// domain is included.
std::vector<BigInt> candidate_multiples(const RationalInterval& domain, const Rational& offset,
                                        const RationalInterval& pi)
{
    // offset + j >= lo/pi and offset + j <= hi/pi, loosened by the pi width.
    const Rational lo_ratio = domain.lo().sign() >= 0 ? domain.lo() / pi.hi() : domain.lo() / pi.lo();
    const Rational hi_ratio = domain.hi().sign() >= 0 ? domain.hi() / pi.lo() : domain.hi() / pi.hi();
    const BigInt first = floor(lo_ratio - offset);
    const BigInt last = ceil(hi_ratio - offset);
    if (last - first > kMaxCriticalPoints)
        throw std::invalid_argument("domain too wide for a range enclosure");

    std::vector<BigInt> out;
    for (BigInt j = first; j <= last; ++j) {
        const RationalInterval point = RationalInterval(offset + Rational(j)) * pi;
        if (!(point.hi() < domain.lo() || domain.hi() < point.lo()))
            out.push_back(j);
    }
    return out;
}

bool is_even(const BigInt& j) { return mpz_even_p(j.get_mpz_t()) != 0; }

RationalInterval sin_range(const RationalInterval& d, const PrecisionRequest& req, const RationalInterval& pi)
{
    RationalInterval r = hull(enclose_sin(d.lo(), req), enclose_sin(d.hi(), req));
    // Extrema at pi/2 + j pi: value +1 for even j, -1 for odd j.
    for (const auto& j : candidate_multiples(d, Rational(BigInt(1), BigInt(2)), pi))
        r = hull(r, RationalInterval(Rational(is_even(j) ? 1 : -1)));
    return r;
}

RationalInterval cos_range(const RationalInterval& d, const PrecisionRequest& req, const RationalInterval& pi)
{
    RationalInterval r = hull(enclose_cos(d.lo(), req), enclose_cos(d.hi(), req));
    for (const auto& j : candidate_multiples(d, Rational(0), pi))
        r = hull(r, RationalInterval(Rational(is_even(j) ? 1 : -1)));
    return r;
}

void require_no_pole(const RationalInterval& d, const RationalInterval& pi, std::string_view fn)
{
    if (!candidate_multiples(d, Rational(0), pi).empty())
        throw PoleProximity(std::string(fn) + ": a multiple of pi may lie in [" + d.lo().str() + ", " +
                            d.hi().str() + "]");
}

}  // namespace

std::string_view to_string(ElementaryFn fn)
{
    switch (fn) {
    case ElementaryFn::Sin: return "sin";
    case ElementaryFn::Cos: return "cos";
    case ElementaryFn::Cot: return "cot";
    case ElementaryFn::Csc: return "csc";
    case ElementaryFn::CscSquared: return "csc^2";
    case ElementaryFn::Exp: return "exp";
    }
    return "?";
}

RationalInterval monotone_range(ElementaryFn fn, const RationalInterval& domain, const PrecisionRequest& req)
{
    const RationalInterval pi = pi_at(level_bits(2));
    switch (fn) {
    case ElementaryFn::Sin:
        return sin_range(domain, req, pi);
    case ElementaryFn::Cos:
        return cos_range(domain, req, pi);
    case ElementaryFn::Exp:
        return {enclose_exp(domain.lo(), req).lo(), enclose_exp(domain.hi(), req).hi()};
    case ElementaryFn::Cot: {
        require_no_pole(domain, pi, "cot");
        // Decreasing on each branch.
        return {enclose_cot(domain.hi(), req).lo(), enclose_cot(domain.lo(), req).hi()};
    }
    case ElementaryFn::Csc:
    case ElementaryFn::CscSquared: {
        require_no_pole(domain, pi, to_string(fn));
        const RationalInterval s = sin_range(domain, req, pi);
        if (s.contains_zero())
            throw PoleProximity("csc: sin range touches zero on the domain");
        const RationalInterval c = RationalInterval(Rational(1)) / s;
        return fn == ElementaryFn::Csc ? c : square(c);
    }
    }
    throw std::invalid_argument("unknown function");
}

}  // namespace rtm
