#include <doctest.h>

#include "rtm/proof.hpp"

using namespace rtm;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

const RationalInterval& half_pi()
{
    static const RationalInterval v = enclose_pi(PrecisionRequest::width(Rational::pow10(-30))) *
                                      RationalInterval(q("1/2"));
    return v;
}

const RationalInterval& quarter_pi()
{
    static const RationalInterval v = half_pi() * RationalInterval(q("1/2"));
    return v;
}

bool contains(const std::vector<std::string>& v, const std::string& needle)
{
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos)
            return true;
    return false;
}

ProofConfig short_config()
{
    ProofConfig cfg;
    cfg.steps = 200;
    cfg.samples = 2;
    cfg.jobs = 1;
    return cfg;
}

}  // namespace

TEST_CASE("sample points along the a edge")
{
    const auto a = sample_points(MirandaRectangle::published().a, 16);
    REQUIRE(a.size() == 16);
    CHECK(a[0] == q("0.5204"));
    CHECK(a[1] == q("781/1500"));
    CHECK(a[15] == q("0.5244"));
    CHECK(sample_half_spacing(MirandaRectangle::published().a, 16) == q("1/7500"));
    CHECK_THROWS_AS(sample_points(MirandaRectangle::published().a, 1), std::invalid_argument);
    CHECK_THROWS_AS((MirandaRectangle{RationalInterval(Rational(1)), RationalInterval(Rational(0), Rational(1))}.validate()),
                    std::invalid_argument);
}

TEST_CASE("Gronwall propagation")
{
    const Rational g1 = gronwall_bound(q("1/7500"), q("6.8246"), q("0.3966"));
    const Rational g2 = gronwall_bound(q("1/7500"), q("6.8246"), q("0.3991"));
    CHECK(g1 >= q("0.001997174315800510737333083") - Rational::pow10(-24));
    CHECK(g1 - q("0.001997174315800510737333083") < Rational::pow10(-20));
    CHECK(g2 >= q("0.002031541449141904811215395") - Rational::pow10(-24));
    CHECK(g2 - q("0.002031541449141904811215395") < Rational::pow10(-20));
    CHECK(gronwall_bound(Rational(0), Rational(5), Rational(1)) == Rational(0));
    CHECK_THROWS_AS(gronwall_bound(Rational(-1), Rational(5), Rational(1)), std::invalid_argument);
}

TEST_CASE("alpha edge: margins, ordering, budget")
{
    AlphaEdgeInput in{"t = t1",
                      {half_pi().hi() + q("0.003"), half_pi().hi() + q("0.004")},
                      EdgeDirection::Above,
                      q("0.0025"),
                      {{"R~", q("0.001"), q("0.0009")}, {"Gronwall", q("0.001"), q("0.0008")}},
                      half_pi()};
    EdgeResult r = alpha_edge_check(in);
    CHECK(r.pass());
    CHECK(r.margins.size() == 2);
    CHECK(r.margins[0].achieved == q("0.003"));
    CHECK(r.margins[0].own_slack == q("0.0013"));

    in.alpha[1] = half_pi().hi() + q("0.002");
    r = alpha_edge_check(in);
    CHECK_FALSE(r.pass());
    CHECK(contains(r.failures(), "alpha_1 - pi/2 > margin"));
    CHECK(contains(r.failures(), "alpha_0 < alpha_1"));

    in.alpha[1] = half_pi().hi() + q("0.004");
    in.required_margin = q("0.0019");
    CHECK(contains(alpha_edge_check(in).failures(), "margin > R~ + Gronwall"));

    in.required_margin = q("0.0025");
    in.budget[0].own = q("0.0011");
    CHECK(contains(alpha_edge_check(in).failures(), "R~ within its published bound"));

    AlphaEdgeInput below{"t = t2", {half_pi().lo() - q("0.003")}, EdgeDirection::Below, q("0.002"), {}, half_pi()};
    CHECK(alpha_edge_check(below).pass());
    below.alpha[0] = half_pi().lo();
    CHECK_FALSE(alpha_edge_check(below).pass());
}

TEST_CASE("theta edge: window, extreme and monotonicity")
{
    // theta_i = pi/4 lo - 0.001 + i * 0.0001 over 10 steps of h = 1/100.
    std::vector<Rational> theta;
    for (int i = 0; i <= 10; ++i)
        theta.push_back(quarter_pi().lo() - q("0.002") + q("0.0001") * Rational(i));
    ThetaEdgeInput in{"a = a1",
                      theta,
                      q("1/100"),
                      RationalInterval(q("0.055"), q("0.085")),
                      EdgeDirection::Below,
                      q("0.001"),
                      q("1/10"),
                      q("0.0006"),
                      {{"R~", q("0.0001"), q("0.0001")}},
                      quarter_pi(),
                      std::nullopt,
                      std::nullopt};
    EdgeResult r = theta_edge_check(in);
    CHECK(r.pass());
    REQUIRE(r.margins.size() == 1);
    // Window 5 .. 9, so the maximum sits at index 9.
    CHECK(r.margins[0].quantity == "theta_9");
    CHECK(r.margins[0].achieved == q("0.0011"));
    CHECK(contains(r.notes, "window indices 5 .. 9"));

    in.published_window_start = 5;
    in.published_window_value = theta[5];
    CHECK(theta_edge_check(in).pass());
    in.published_window_start = 6;
    CHECK(contains(theta_edge_check(in).failures(), "window start index"));
    in.published_window_start.reset();

    // A flat step is fine, a decreasing one is not.
    in.theta[3] = in.theta[2];
    CHECK(theta_edge_check(in).pass());
    in.theta[3] = in.theta[2] - q("0.00001");
    CHECK(contains(theta_edge_check(in).failures(), "theta non-decreasing"));
    in.theta = theta;

    // Interpolation bound |theta'| h / 2 must stay below the stated one.
    in.f2_bound = Rational(1);
    CHECK(contains(theta_edge_check(in).failures(), "interpolation bound"));
    in.f2_bound = q("1/10");

    // Window beyond the run.
    in.window = RationalInterval(q("0.05"), q("0.2"));
    CHECK(contains(theta_edge_check(in).failures(), "i_hi <= k"));

    in.theta.clear();
    CHECK_THROWS_AS(theta_edge_check(in), std::invalid_argument);
}

TEST_CASE("Miranda on a toy problem")
{
    // F = t - 1/2 must be > 0 at t = t1, so use F = 1/2 - t, G = a - 1/2 on [0,1]^2.
    const MirandaRectangle rect{RationalInterval(Rational(0), Rational(1)), RationalInterval(Rational(0), Rational(1))};
    auto f = [](const RationalInterval&, const RationalInterval& t) { return RationalInterval(q("1/2")) - t; };
    auto g = [](const RationalInterval& a, const RationalInterval&) { return a - RationalInterval(q("1/2")); };
    const auto edges = interval_edge_verdicts(f, g, rect);
    REQUIRE(edges.size() == 4);
    const MirandaVerdict v = miranda_conclude(edges, rect);
    CHECK(v.exists);
    CHECK(v.reasons.empty());

    // Swap the sign of G: the a edges now have the wrong signs.
    auto g_bad = [](const RationalInterval& a, const RationalInterval&) { return RationalInterval(q("1/2")) - a; };
    const MirandaVerdict w = miranda_conclude(interval_edge_verdicts(f, g_bad, rect), rect);
    CHECK_FALSE(w.exists);
    CHECK(contains(w.reasons, "a = a1 edge sign violated: expected G < 0"));

    // A G that vanishes on an edge gives no sign.
    auto g_zero = [](const RationalInterval& a, const RationalInterval& t) { return a - t; };
    const MirandaVerdict z = miranda_conclude(interval_edge_verdicts(f, g_zero, rect), rect);
    CHECK_FALSE(z.exists);
    CHECK(contains(z.reasons, "sign of G not established"));

    CHECK(contains(miranda_conclude({}, rect).reasons, "no verdict for F > 0"));
    CHECK(to_string(RectangleEdge::TimeHigh) == "t = t2");
}

TEST_CASE("short proof runs are deterministic")
{
    const ProofConfig cfg = short_config();
    CHECK_FALSE(cfg.tables_applicable());
    CHECK(ProofConfig{}.tables_applicable());
    const ProofCertificate a = run_full_proof(cfg);
    const ProofCertificate b = run_full_proof(cfg);
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(a.config_hash.size() == 64);
    CHECK_FALSE(a.to_json(false).contains("generated_at"));
    CHECK(a.to_json(true).contains("generated_at"));
    CHECK(a.runs_early.size() == 2);
    CHECK(a.runs_late.size() == 2);
    CHECK_FALSE(a.tables.compared);
    // The published U1 misses the iterates from the very first step.
    CHECK_FALSE(a.verdict);
    CHECK(contains(a.reasons, "left U1 at step 0"));

    for (const char* key : {"config", "lemmas", "tables", "error_bounds", "gronwall", "margins", "miranda", "notes",
                            "verdict", "box", "constants"})
        CHECK(a.to_json(false).contains(key));

    ProofConfig other = cfg;
    other.samples = 3;
    CHECK(run_full_proof(other).config_hash != a.config_hash);
}

TEST_CASE("a tiny epsilon violates the error-bound hypothesis")
{
    ProofConfig cfg = short_config();
    cfg.constants.epsilon = q("1e-6");
    const ProofCertificate c = run_full_proof(cfg);
    CHECK_FALSE(c.verdict);
    CHECK(contains(c.reasons, "hypothesis-violated: "));
}

TEST_CASE("invalid proof configurations")
{
    ProofConfig cfg = short_config();
    cfg.steps = 0;
    CHECK_THROWS_AS(run_full_proof(cfg), ConfigError);
    cfg = short_config();
    cfg.samples = 1;
    CHECK_THROWS_AS(run_full_proof(cfg), ConfigError);
}
