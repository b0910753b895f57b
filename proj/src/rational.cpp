#include "rtm/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace rtm {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole)
{
    if (digits.empty())
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    return BigInt(std::string(digits), 10);
}

BigInt parse_signed(std::string_view s, std::string_view whole)
{
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    BigInt v = parse_integer(s, whole);
    return neg ? BigInt(-v) : v;
}

Rational parse_decimal(std::string_view s, std::string_view whole)
{
    int exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const BigInt ev = parse_signed(s.substr(e + 1), whole);
        if (!ev.fits_sint_p() || abs(ev) > 100000)
            throw std::invalid_argument("exponent out of range: '" + std::string(whole) + "'");
        exponent = static_cast<int>(ev.get_si());
        s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    int frac = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto ip = s.substr(0, dot);
        const auto fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty())
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
        digits = std::string(ip) + std::string(fp);
        frac = static_cast<int>(fp.size());
    } else {
        digits = std::string(s);
    }
    Rational v(parse_integer(digits, whole));
    v *= Rational::pow10(exponent - frac);
    return neg ? -v : v;
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        throw std::invalid_argument("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_signed(text.substr(0, slash), text);
        const BigInt den = parse_signed(text.substr(slash + 1), text);
        if (den == 0)
            throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        return Rational(num, den);
    }
    return parse_decimal(text, text);
}

Rational Rational::pow10(int e)
{
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

std::string Rational::str() const
{
    return q_.get_num().get_str(10) + "/" + q_.get_den().get_str(10);
}

std::string Rational::to_decimal(int digits) const
{
    if (digits < 0)
        digits = 0;
    const Rational scaled = abs(*this) * pow10(digits);
    const BigInt t = floor(scaled);
    std::string s = t.get_str(10);
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits)
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return (sign() < 0 && t != 0 ? "-" : "") + s;
}

BigInt floor(const Rational& x)
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), x.value().get_num_mpz_t(), x.value().get_den_mpz_t());
    return r;
}

BigInt ceil(const Rational& x)
{
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), x.value().get_num_mpz_t(), x.value().get_den_mpz_t());
    return r;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& x, unsigned e)
{
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), x.value().get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), x.value().get_den_mpz_t(), e);
    return Rational(mpq_class(n, d));
}

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational sqrt_upper(const Rational& x, const Rational& slack)
{
    if (x.sign() < 0)
        throw std::domain_error("sqrt_upper of a negative number");
    if (slack.sign() <= 0)
        throw std::invalid_argument("sqrt_upper needs a positive slack");
    if (x.is_zero())
        return Rational(0);

    // Start from the integer square root bracket, then bisect.
    const BigInt fl = floor(x);
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
    Rational lo = s == 0 ? Rational(0) : Rational(s);
    Rational hi = Rational(BigInt(s + 1));
    while (hi - lo > slack) {
        Rational mid = (lo + hi) / 2;
        if (mid * mid >= x)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

Rational factorial(unsigned n)
{
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

}  // namespace rtm
