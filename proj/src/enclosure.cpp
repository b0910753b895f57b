#include "rtm/enclosure.hpp"

#include <map>
#include <mutex>

namespace rtm {

namespace {

// [lo, hi] * 2^-w with integer endpoints.
struct Fixed {
    BigInt lo;
    BigInt hi;
};

constexpr unsigned kGuardBits = 24;

BigInt one_at(unsigned w)
{
    BigInt v = 1;
    v <<= w;
    return v;
}

// trunc(a * b / 2^w); error below one unit in the last place.
BigInt mul_fixed(const BigInt& a, const BigInt& b, unsigned w)
{
    BigInt p = a * b;
    mpz_tdiv_q_2exp(p.get_mpz_t(), p.get_mpz_t(), w);
    return p;
}

BigInt tdiv(const BigInt& a, unsigned long d)
{
    BigInt q;
    mpz_tdiv_q_ui(q.get_mpz_t(), a.get_mpz_t(), d);
    return q;
}

// floor(x * 2^w)
BigInt to_fixed_floor(const Rational& x, unsigned w)
{
    BigInt n = x.numerator();
    n <<= w;
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), x.value().get_den_mpz_t());
    return q;
}

RationalInterval to_rational(const Fixed& f, unsigned w)
{
    const BigInt den = one_at(w);
    return {Rational(f.lo, den), Rational(f.hi, den)};
}

// atan(1/n) * 2^w by the alternating Gregory series. Each partial power
// 2^w / n^(2j+1) is truncated (error < 1.05 ulp for n >= 5) and each term
// adds one more truncation, so a term is off by < 2.05 ulp. The tail after
// the last computed term is below the first omitted term (< 1.05 ulp).
Fixed atan_inv(unsigned long n, unsigned w)
{
    const unsigned long n2 = n * n;
    BigInt power = tdiv(one_at(w), n);
    BigInt sum = 0;
    unsigned long terms = 0;
    for (unsigned long j = 0; power != 0; ++j) {
        BigInt term = tdiv(power, 2 * j + 1);
        if (j % 2 == 0)
            sum += term;
        else
            sum -= term;
        ++terms;
        power = tdiv(power, n2);
    }
    const BigInt err = BigInt(3 * terms + 3);
    return {sum - err, sum + err};
}

Fixed compute_pi(unsigned w)
{
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    const Fixed a = atan_inv(5, w);
    const Fixed b = atan_inv(239, w);
    return {16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo};
}

const Fixed& pi_fixed(unsigned w)
{
    static std::mutex mu;
    static std::map<unsigned, Fixed> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(w);
    if (it == cache.end())
        it = cache.emplace(w, compute_pi(w)).first;
    return it->second;
}

// Maclaurin series of sin and cos at the exact point c * 2^-w, |c| <= 2^w.
// Every term is formed from the previous one by a multiplication by c^2 and
// a division by a small integer, each truncated. With |c * 2^-w| < 1 the
// propagated error stays below 2.5 ulp per term, and the alternating tail
// is below the first omitted term, which computes to zero, so its true
// value is below 2.5 ulp as well.
struct SeriesResult {
    BigInt value;
    BigInt err;
};

SeriesResult sin_series(const BigInt& c, const BigInt& c2, unsigned w)
{
    BigInt term = c;
    BigInt sum = c;
    unsigned long terms = 1;
    for (unsigned long j = 1;; ++j) {
        term = tdiv(mul_fixed(term, c2, w), (2 * j) * (2 * j + 1));
        if (term == 0)
            break;
        if (j % 2)
            sum -= term;
        else
            sum += term;
        ++terms;
    }
    return {sum, BigInt(3 * terms + 6)};
}

SeriesResult cos_series(const BigInt& c2, unsigned w)
{
    BigInt term = one_at(w);
    BigInt sum = term;
    unsigned long terms = 1;
    for (unsigned long j = 1;; ++j) {
        term = tdiv(mul_fixed(term, c2, w), (2 * j - 1) * (2 * j));
        if (term == 0)
            break;
        if (j % 2)
            sum -= term;
        else
            sum += term;
        ++terms;
    }
    return {sum, BigInt(3 * terms + 6)};
}

Fixed clamp_unit(Fixed f, unsigned w)
{
    const BigInt one = one_at(w);
    if (f.lo < -one)
        f.lo = -one;
    if (f.hi > one)
        f.hi = one;
    return f;
}

Fixed negate(const Fixed& f) { return {-f.hi, -f.lo}; }

}  // namespace

PrecisionRequest PrecisionRequest::width(Rational w, int max_refinements)
{
    if (w.sign() <= 0)
        throw std::invalid_argument("target width must be positive");
    if (max_refinements < 0)
        throw std::invalid_argument("max_refinements must be nonnegative");
    return {std::move(w), max_refinements};
}

unsigned level_bits(int level)
{
    if (level < 0 || level > 24)
        throw std::out_of_range("refinement level out of range");
    return 64u << level;
}

RationalInterval pi_at(unsigned bits)
{
    const unsigned w = bits + kGuardBits;
    return to_rational(pi_fixed(w), w);
}

SinCos sin_cos_at(const Rational& x, unsigned bits)
{
    // Quadrant k = round(2x / pi); any k is sound, a good one keeps the
    // reduced argument below pi/4.
    static const Rational pi_rough = to_rational(pi_fixed(64), 64).lo();
    const BigInt k = floor(x * 2 / pi_rough + Rational(BigInt(1), BigInt(2)));
    const unsigned kbits = static_cast<unsigned>(mpz_sizeinbase(k.get_mpz_t(), 2));
    const unsigned w = bits + kGuardBits + kbits;

    const Fixed& pi = pi_fixed(w);
    const BigInt half_lo = pi.lo >> 1;
    BigInt half_hi;
    mpz_cdiv_q_2exp(half_hi.get_mpz_t(), pi.hi.get_mpz_t(), 1);

    // x in [X, X + 1] ulp; reduced r = x - k pi/2 in [r_lo, r_hi].
    const BigInt X = to_fixed_floor(x, w);
    BigInt r_lo, r_hi;
    if (k >= 0) {
        r_lo = X - k * half_hi;
        r_hi = X + 1 - k * half_lo;
    } else {
        r_lo = X - k * half_lo;
        r_hi = X + 1 - k * half_hi;
    }
    const BigInt radius = r_hi - r_lo;
    const BigInt c2 = mul_fixed(r_lo, r_lo, w);

    // Both functions are 1-Lipschitz, so the spread of r adds its radius.
    const SeriesResult s = sin_series(r_lo, c2, w);
    const SeriesResult co = cos_series(c2, w);
    const Fixed sin_r{s.value - s.err - radius, s.value + s.err + radius};
    const Fixed cos_r{co.value - co.err - radius, co.value + co.err + radius};

    BigInt q;
    mpz_fdiv_r_ui(q.get_mpz_t(), k.get_mpz_t(), 4);
    Fixed sin_x, cos_x;
    switch (q.get_ui()) {
    case 0: sin_x = sin_r; cos_x = cos_r; break;
    case 1: sin_x = cos_r; cos_x = negate(sin_r); break;
    case 2: sin_x = negate(sin_r); cos_x = negate(cos_r); break;
    default: sin_x = negate(cos_r); cos_x = sin_r; break;
    }
    return {to_rational(clamp_unit(sin_x, w), w), to_rational(clamp_unit(cos_x, w), w)};
}

RationalInterval exp_at(const Rational& x, unsigned bits)
{
    if (x.is_zero())
        return RationalInterval(Rational(1));

    // Halve until |x| / 2^s <= 1/2, then square s times.
    unsigned s = 0;
    Rational c = x;
    const Rational half(BigInt(1), BigInt(2));
    while (abs(c) > half) {
        c /= 2;
        ++s;
    }
    // e^x < 2^(2x): extra integer bits for positive arguments.
    unsigned growth = 0;
    if (x.sign() > 0) {
        const BigInt cx = ceil(x);
        if (!cx.fits_uint_p() || cx > 1000000)
            throw std::out_of_range("exp argument too large: " + x.str());
        growth = 2 * static_cast<unsigned>(cx.get_ui());
    }
    const unsigned w = bits + kGuardBits + 2 * s + growth;

    // c in [C, C + 1] ulp. Terms below 2.5 ulp of error each; the tail of
    // sum c^j/j! for |c| <= 1/2 is at most twice the first omitted term.
    const BigInt C = to_fixed_floor(c, w);
    BigInt term = one_at(w);
    BigInt sum = term;
    unsigned long terms = 1;
    for (unsigned long j = 1;; ++j) {
        term = tdiv(mul_fixed(term, C, w), j);
        if (term == 0)
            break;
        sum += term;
        ++terms;
    }
    const BigInt err = BigInt(3 * terms + 8);
    // exp is at most e^(1/2) < 2 Lipschitz on the reduced range.
    Fixed e{sum - err, sum + err + 2};
    if (e.lo < 1)
        e.lo = 1;
    for (unsigned i = 0; i < s; ++i) {
        BigInt lo = e.lo * e.lo;
        BigInt hi = e.hi * e.hi;
        mpz_fdiv_q_2exp(lo.get_mpz_t(), lo.get_mpz_t(), w);
        mpz_cdiv_q_2exp(hi.get_mpz_t(), hi.get_mpz_t(), w);
        e = {lo, hi};
    }
    return to_rational(e, w);
}

RationalInterval refine_until(const PrecisionRequest& req,
                              const std::function<std::optional<RationalInterval>(int level)>& eval,
                              const char* what)
{
    std::optional<RationalInterval> acc;
    for (int level = 0; level <= req.max_refinements; ++level) {
        auto next = eval(level);
        if (!next)
            continue;
        acc = acc ? intersect(*acc, *next) : *next;
        if (acc->width() <= req.target_width)
            return *acc;
    }
    if (!acc)
        throw PoleProximity(std::string(what) + ": argument not separated from a pole");
    throw RefinementExhausted(std::string(what) + ": width target not reached within the refinement budget");
}

RationalInterval enclose_pi(const PrecisionRequest& req)
{
    return refine_until(req, [](int level) { return std::optional(pi_at(level_bits(level))); }, "pi");
}

RationalInterval enclose_sin(const Rational& x, const PrecisionRequest& req)
{
    return refine_until(req, [&](int level) { return std::optional(sin_cos_at(x, level_bits(level)).sin); },
                        "sin");
}

RationalInterval enclose_cos(const Rational& x, const PrecisionRequest& req)
{
    return refine_until(req, [&](int level) { return std::optional(sin_cos_at(x, level_bits(level)).cos); },
                        "cos");
}

RationalInterval enclose_cot(const Rational& x, const PrecisionRequest& req)
{
    return refine_until(
        req,
        [&](int level) -> std::optional<RationalInterval> {
            const SinCos sc = sin_cos_at(x, level_bits(level));
            if (sc.sin.contains_zero())
                return std::nullopt;
            return sc.cos / sc.sin;
        },
        "cot");
}

RationalInterval enclose_csc(const Rational& x, const PrecisionRequest& req)
{
    return refine_until(
        req,
        [&](int level) -> std::optional<RationalInterval> {
            const SinCos sc = sin_cos_at(x, level_bits(level));
            if (sc.sin.contains_zero())
                return std::nullopt;
            return RationalInterval(Rational(1)) / sc.sin;
        },
        "csc");
}

RationalInterval enclose_exp(const Rational& x, const PrecisionRequest& req)
{
    return refine_until(req, [&](int level) { return std::optional(exp_at(x, level_bits(level))); }, "exp");
}

Rational floor_of_enclosed(RationalInterval v, const GridSpec& grid,
                           const std::function<std::optional<RationalInterval>()>& refine, int max_refinements)
{
    for (int attempt = 0;; ++attempt) {
        const BigInt lo = grid_index(v.lo(), grid);
        if (lo == grid_index(v.hi(), grid))
            return Rational(lo) * grid.resolution();
        if (attempt >= max_refinements)
            break;
        auto next = refine();
        if (!next)
            break;
        v = std::move(*next);
    }
    throw GridTieUnresolved("enclosure [" + v.lo().str() + ", " + v.hi().str() + "] still straddles a grid point");
}

}  // namespace rtm
