#include "rtm/cmc.hpp"

#include <sstream>

namespace rtm {

namespace {

Rational dec(const char* s) { return Rational::parse(s); }

const PrecisionRequest& box_precision()
{
    static const PrecisionRequest req = PrecisionRequest::width(Rational::pow10(-12));
    return req;
}

RationalInterval point(long v) { return RationalInterval(Rational(v)); }

std::string label(const char* fmt_prefix, int i, const char* suffix)
{
    std::ostringstream os;
    os << fmt_prefix << i << suffix;
    return os.str();
}

}  // namespace

std::optional<IntervalVector> CmcField::enclose(const RationalVector& u, int level) const
{
    const unsigned bits = level_bits(level);
    const SinCos r = sin_cos_at(u.at(0), bits);
    const SinCos two_theta = sin_cos_at(u.at(1) * 2, bits);
    const SinCos a = sin_cos_at(u.at(2), bits);
    if (r.sin.contains_zero() || two_theta.sin.contains_zero())
        return std::nullopt;

    // Quotients produce odd denominators; keep operands dyadic and short.
    const unsigned keep = bits + 32;
    const RationalInterval& g1 = a.cos;
    const RationalInterval& g2 = a.sin;
    const RationalInterval g3 = round_out(point(1) / r.sin, keep);
    const RationalInterval g4 = round_out(r.cos / r.sin, keep);
    const RationalInterval g5 = round_out(two_theta.cos / two_theta.sin, keep);

    IntervalVector f;
    f.reserve(3);
    f.push_back(g1);
    f.push_back(round_out(g2 * g3, keep));
    f.push_back(round_out(point(-3) * g2 * g4 + point(2) * g1 * g3 * g5 - point(3), keep));
    return f;
}

IntervalVector CmcField::f_range(const Box& box) const
{
    const auto g = cmc_g_ranges(box);
    return {g[0], g[1] * g[2], point(-3) * g[1] * g[3] + point(2) * g[0] * g[2] * g[4] - point(3)};
}

IntervalMatrix CmcField::jacobian_range(const Box& box) const
{
    const auto g = cmc_g_ranges(box);
    const auto& [g1, g2, g3, g4, g5, g6] = g;
    const RationalInterval zero = point(0);
    return {
        {zero, zero, -g2},
        {-(g2 * g3 * g4), zero, g1 * g3},
        {g3 * (point(3) * g2 * g3 - point(2) * g1 * g4 * g5), point(-4) * g1 * g3 * g6,
         point(-3) * g1 * g4 - point(2) * g2 * g3 * g5},
    };
}

FieldPtr cmc_field()
{
    static const FieldPtr field = std::make_shared<CmcField>();
    return field;
}

IntervalVector cmc_f_enclose(const RationalVector& u, const PrecisionRequest& req)
{
    const CmcField field;
    bool separated = false;
    for (int level = 0; level <= req.max_refinements; ++level) {
        auto f = field.enclose(u, level);
        if (!f)
            continue;
        separated = true;
        bool narrow = true;
        for (const auto& c : *f)
            narrow = narrow && c.width() <= req.target_width;
        if (narrow)
            return *f;
    }
    if (!separated)
        throw PoleProximity("cmc-s4: sin r or sin 2theta not separated from zero");
    throw RefinementExhausted("cmc-s4: width target not reached");
}

std::array<RationalInterval, 6> cmc_g_ranges(const Box& box)
{
    if (box.dimension() != 3)
        throw std::invalid_argument("cmc-s4 boxes are three-dimensional");
    const auto& req = box_precision();
    const RationalInterval two_theta = point(2) * box[1];
    return {
        monotone_range(ElementaryFn::Cos, box[2], req),
        monotone_range(ElementaryFn::Sin, box[2], req),
        monotone_range(ElementaryFn::Csc, box[0], req),
        monotone_range(ElementaryFn::Cot, box[0], req),
        monotone_range(ElementaryFn::Cot, two_theta, req),
        monotone_range(ElementaryFn::CscSquared, two_theta, req),
    };
}

CmcConstants CmcConstants::published()
{
    CmcConstants c;
    c.u1 = Box{{dec("1321/1000"), dec("1571/1000")},
               {dec("261/500"), dec("393/500")},
               {dec("157/100"), dec("1571/500")}};
    c.epsilon = dec("1/1000");
    c.f_bounds = {dec("1"), dec("1.033"), dec("4.98")};
    c.jacobian_bounds = BoundMatrix{{dec("0"), dec("0"), dec("1")},
                                    {dec("0.265"), dec("0"), dec("1.033")},
                                    {dec("3.506"), dec("5.539"), dec("1.21")}};
    c.k0 = dec("6.8246");
    c.m0 = dec("4.98");
    c.m = {dec("4.98"), dec("5.41"), dec("15.26")};
    return c;
}

bool LemmaReport::passed() const
{
    for (const auto& c : checks)
        if (!c.holds())
            return false;
    return true;
}

std::vector<std::string> LemmaReport::failures() const
{
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.holds())
            out.push_back(c.label + " (" + c.lhs.to_decimal(12) + " " + std::string(to_string(c.relation)) + " " +
                          c.rhs.to_decimal(12) + ")");
    return out;
}

void LemmaReport::require() const
{
    const auto f = failures();
    if (f.empty())
        return;
    std::string msg = name + " failed:";
    for (const auto& s : f)
        msg += "\n  " + s;
    throw VerificationFailed(msg);
}

LemmaReport verify_lemma1(const Box& u2)
{
    const auto& req = box_precision();
    const auto g = cmc_g_ranges(u2);
    const Rational& b1 = u2[0].lo();
    const Rational& c1 = u2[0].hi();
    const Rational& b2 = u2[1].lo();
    const Rational& c2 = u2[1].hi();
    const Rational& b3 = u2[2].lo();
    const Rational& c3 = u2[2].hi();

    const std::array<RationalInterval, 6> d{
        point(-1),
        enclose_sin(c3, req),
        point(1),
        enclose_cot(c1, req),
        enclose_cot(c2 * 2, req),
        point(1),
    };
    const std::array<RationalInterval, 6> e{
        enclose_cos(b3, req),
        point(1),
        enclose_csc(b1, req),
        enclose_cot(b1, req),
        enclose_cot(b2 * 2, req),
        square(enclose_csc(b2 * 2, req)),
    };

    LemmaReport rep{"lemma1", {}, {}, {}};
    const Rational max_width = Rational::pow10(-8);
    for (int i = 0; i < 6; ++i) {
        const auto k = static_cast<std::size_t>(i);
        rep.ranges.emplace_back(label("g", i + 1, ""), g[k]);
        rep.ranges.emplace_back(label("d", i + 1, ""), d[k]);
        rep.ranges.emplace_back(label("e", i + 1, ""), e[k]);
        rep.checks.push_back(check_greater_equal(label("g", i + 1, " lower end >= d") + std::to_string(i + 1),
                                                 g[k].lo(), d[k].lo()));
        rep.checks.push_back(check_less_equal(label("g", i + 1, " upper end <= e") + std::to_string(i + 1),
                                              g[k].hi(), e[k].hi()));
        rep.checks.push_back(check_less_equal(label("width of d", i + 1, " enclosure"), d[k].width(), max_width));
        rep.checks.push_back(check_less_equal(label("width of e", i + 1, " enclosure"), e[k].width(), max_width));
    }
    return rep;
}

LemmaReport verify_lemma2(const Box& u2)
{
    const auto& req = box_precision();
    const auto g = cmc_g_ranges(u2);
    const RationalInterval g7 = g[1] * g[2];
    const std::array<RationalInterval, 3> g8_factors{g[0], g[2], g[4]};
    const RationalInterval g8 = range_product_bound(g8_factors, Rational(2));
    const std::array<RationalInterval, 2> g9_factors{g[1], g[3]};
    const RationalInterval g9 = point(-3) + range_product_bound(g9_factors, Rational(-3));
    const RationalInterval e3 = enclose_csc(u2[0].lo(), req);

    LemmaReport rep{"lemma2", {}, {}, {}};
    rep.ranges = {{"f1 = g1", g[0]}, {"g7 = w2 w3", g7}, {"g8 = 2 w1 w3 w5", g8}, {"g9 = -3 - 3 w2 w4", g9}};
    rep.notes.push_back("the upper end of g9 is -3 - 3 cot(2 * upper u2 edge) = " + g9.hi().to_decimal(6) +
                        "..., above the displayed -2.9964; only the lower end enters the |f3| bound");
    rep.checks = {
        check_less_equal("|f1| <= 1", g[0].mag(), dec("1")),
        check_greater("g7 lower end > -0.002", g7.lo(), dec("-0.002")),
        check_less_equal("g7 upper end <= csc(lower u1 edge)", g7.hi(), e3.hi()),
        check_less("csc(lower u1 edge) < 1.033", e3.hi(), dec("1.033")),
        check_less("|f2| < 1.033", g7.mag(), dec("1.033")),
        check_greater("g8 lower end > -1.2064", g8.lo(), dec("-1.2064")),
        check_less("g8 upper end < 0.0067", g8.hi(), dec("0.0067")),
        check_greater("g9 lower end > -3.7686", g9.lo(), dec("-3.7686")),
        check_less("g9 upper end < -2.9963", g9.hi(), dec("-2.9963")),
        check_less("1.2064 + 3.7686 < 4.98", dec("1.2064") + dec("3.7686"), dec("4.98")),
        check_less("|f3| <= |g8| + |g9| < 4.98", g8.mag() + g9.mag(), dec("4.98")),
    };
    return rep;
}

LemmaReport verify_lemma3(const Box& u2, const CmcConstants& c)
{
    const IntervalMatrix df = cmc_field()->jacobian_range(u2);
    LemmaReport rep{"lemma3", {}, {}, {}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            std::ostringstream name;
            name << "|df" << i + 1 << "/du" << j + 1 << "| <= b" << i + 1 << j + 1;
            rep.ranges.emplace_back("Df" + std::to_string(i + 1) + std::to_string(j + 1), df[i][j]);
            rep.checks.push_back(check_less_equal(name.str(), df[i][j].mag(), c.jacobian_bounds(i, j)));
        }
    }
    const Rational sumsq = c.jacobian_bounds.sum_of_squares();
    const Rational norm = frobenius_norm_bound(c.jacobian_bounds);
    rep.checks.push_back(check_equal("sum of b_ij^2 == 46.573971", sumsq, dec("46.573971")));
    rep.checks.push_back(check_less_equal("sum of b_ij^2 <= K0^2", sumsq, c.k0 * c.k0));
    rep.checks.push_back(check_less_equal("Frobenius bound of b <= K0", norm, c.k0));
    rep.notes.push_back("|Df| is read as the Frobenius norm; it dominates the spectral norm, and "
                        "sqrt(46.573971) = 6.82451... matches K0 = 6.8246");
    return rep;
}

LemmaReport verify_lemma4(const Box& u2, const CmcConstants& c)
{
    LemmaReport rep{"lemma4", {}, {}, {}};
    const RationalVector product = c.jacobian_bounds.apply(c.f_bounds);
    const RationalVector stated{dec("4.98"), dec("5.40934"), dec("15.253587")};
    const IntervalVector direct = cmc_field()->f1_range(u2);
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string idx = std::to_string(i + 1);
        rep.ranges.emplace_back("F1" + idx + " (direct interval evaluation)", direct[i]);
        rep.checks.push_back(check_equal("(bDf |f|)_" + idx + " matches displayed product", product[i], stated[i]));
        rep.checks.push_back(check_less_equal("(bDf |f|)_" + idx + " <= M" + idx, product[i], c.m.at(i)));
        rep.checks.push_back(
            check_less_equal("|F1" + idx + "| <= M" + idx + " by direct interval evaluation", direct[i].mag(), c.m.at(i)));
        rep.checks.push_back(check_less_equal("|f" + idx + "| bound <= M0", c.f_bounds.at(i), c.m0));
    }
    Rational msq(0);
    for (const auto& v : c.m)
        msq += v * v;
    rep.checks.push_back(check_equal("M1^2 + M2^2 + M3^2 == 286.9361", msq, dec("286.9361")));
    const Rational m_upper = sqrt_upper(msq, Rational::pow10(-12));
    rep.ranges.emplace_back("M upper bound", RationalInterval(m_upper));
    rep.notes.push_back("the |f_i| bounds used here are the ones checked by lemma2");
    rep.notes.push_back("sqrt(M1^2 + M2^2 + M3^2) < " + m_upper.to_decimal(6) +
                        "; this bound, not the rounded 16.9424, enters R~");
    return rep;
}

namespace {

Rational ceil_to(const Rational& x, const Rational& unit) { return Rational(ceil(x / unit)) * unit; }

// Sub-boxes of b, pieces per axis.
std::vector<Box> subdivide(const Box& b, int pieces)
{
    std::vector<Box> out{b};
    for (std::size_t axis = 0; axis < b.dimension(); ++axis) {
        std::vector<Box> next;
        for (const auto& box : out) {
            const Rational d = box[axis].width() / Rational(pieces);
            for (int p = 0; p < pieces; ++p) {
                Box piece = box;
                piece[axis] = RationalInterval(box[axis].lo() + d * Rational(p), box[axis].lo() + d * Rational(p + 1));
                next.push_back(std::move(piece));
            }
        }
        out = std::move(next);
    }
    return out;
}

struct Magnitudes {
    RationalVector f = RationalVector(3, Rational(0));
    std::vector<RationalVector> df = std::vector<RationalVector>(3, RationalVector(3, Rational(0)));
    RationalVector f1 = RationalVector(3, Rational(0));
};

Magnitudes magnitudes(const Box& u2, int pieces)
{
    const FieldPtr field = cmc_field();
    Magnitudes m;
    for (const Box& b : subdivide(u2, pieces)) {
        const IntervalVector f = field->f_range(b);
        const IntervalMatrix df = field->jacobian_range(b);
        const IntervalVector f1 = field->f1_range(b);
        for (std::size_t i = 0; i < 3; ++i) {
            m.f[i] = max(m.f[i], f[i].mag());
            m.f1[i] = max(m.f1[i], f1[i].mag());
            for (std::size_t j = 0; j < 3; ++j)
                m.df[i][j] = max(m.df[i][j], df[i][j].mag());
        }
    }
    return m;
}

}  // namespace

CmcConstants derive_constants(const Box& u1, const Rational& epsilon, int pieces)
{
    CmcConstants c;
    c.u1 = u1;
    c.epsilon = epsilon;
    const Magnitudes m = magnitudes(c.u2(), pieces);
    const Rational unit = Rational::pow10(-4);
    c.f_bounds.clear();
    c.m.clear();
    c.m0 = Rational(0);
    for (std::size_t i = 0; i < 3; ++i) {
        c.f_bounds.push_back(ceil_to(m.f[i], unit));
        c.m0 = max(c.m0, c.f_bounds.back());
        c.m.push_back(ceil_to(m.f1[i], unit));
        for (std::size_t j = 0; j < 3; ++j)
            c.jacobian_bounds.set(i, j, ceil_to(m.df[i][j], unit));
    }
    c.k0 = ceil_to(frobenius_norm_bound(c.jacobian_bounds), unit);
    return c;
}

LemmaReport verify_constants(const CmcConstants& c, int pieces)
{
    const Magnitudes m = magnitudes(c.u2(), pieces);
    LemmaReport rep{"derived bounds", {}, {}, {}};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string idx = std::to_string(i + 1);
        rep.checks.push_back(check_less_equal("|f" + idx + "| <= bound", m.f[i], c.f_bounds.at(i)));
        rep.checks.push_back(check_less_equal("|f" + idx + "| bound <= M0", c.f_bounds.at(i), c.m0));
        rep.checks.push_back(check_less_equal("|F1" + idx + "| <= M" + idx, m.f1[i], c.m.at(i)));
        for (std::size_t j = 0; j < 3; ++j)
            rep.checks.push_back(check_less_equal("|df" + idx + "/du" + std::to_string(j + 1) + "| <= b" + idx +
                                                      std::to_string(j + 1),
                                                  m.df[i][j], c.jacobian_bounds(i, j)));
    }
    rep.checks.push_back(check_less_equal("sum of b_ij^2 <= K0^2", c.jacobian_bounds.sum_of_squares(), c.k0 * c.k0));
    rep.notes.push_back("ranges from interval evaluation over " + std::to_string(pieces) + "^3 sub-boxes of U2");
    return rep;
}

std::vector<LemmaReport> verify_all_lemmas(const CmcConstants& c)
{
    const Box u2 = c.u2();
    return {verify_lemma1(u2), verify_lemma2(u2), verify_lemma3(u2, c), verify_lemma4(u2, c)};
}

}  // namespace rtm
