#include "rtm/proof.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "rtm/published_tables.hpp"

namespace rtm {

using nlohmann::json;

namespace {

const PrecisionRequest& tight()
{
    static const PrecisionRequest req = PrecisionRequest::width(Rational::pow10(-24));
    return req;
}

// Smallest multiple of unit strictly above x.
Rational strictly_above(const Rational& x, const Rational& unit) { return Rational(BigInt(floor(x / unit) + 1)) * unit; }

std::string dec(const Rational& v, int digits = 10) { return v.to_decimal(digits); }

std::string describe(const Inequality& q)
{
    return q.label + " (" + dec(q.lhs, 12) + " " + std::string(to_string(q.relation)) + " " + dec(q.rhs, 12) + ")";
}

Rational budget_sum(const std::vector<BudgetItem>& items, bool published)
{
    Rational s(0);
    for (const auto& b : items)
        s += published ? b.published : b.own;
    return s;
}

std::string budget_label(const std::vector<BudgetItem>& items)
{
    std::string s;
    for (const auto& b : items)
        s += (s.empty() ? "" : " + ") + b.name;
    return s;
}

unsigned resolve_jobs(unsigned requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("RTM_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i in [0, count) on a small pool; results are stored by
// index so the outcome does not depend on scheduling.
template <class Task>
void parallel_for(std::size_t count, unsigned jobs, Task task)
{
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            task(i);
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    if (n <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json interval_pair(const RationalInterval& v) { return json::array({v.lo().str(), v.hi().str()}); }

}  // namespace

MirandaRectangle MirandaRectangle::published()
{
    return {RationalInterval(Rational::parse("0.5204"), Rational::parse("0.5244")),
            RationalInterval(Rational::parse("0.3966"), Rational::parse("0.3991"))};
}

void MirandaRectangle::validate() const
{
    if (a.width().sign() <= 0 || t.width().sign() <= 0)
        throw std::invalid_argument("degenerate rectangle");
}

std::vector<Rational> sample_points(const RationalInterval& a, int count)
{
    if (count < 2)
        throw std::invalid_argument("need at least two samples");
    const Rational d = a.width() / Rational(count - 1);
    std::vector<Rational> out;
    for (int j = 0; j < count; ++j)
        out.push_back(a.lo() + d * Rational(j));
    return out;
}

Rational sample_half_spacing(const RationalInterval& a, int count)
{
    if (count < 2)
        throw std::invalid_argument("need at least two samples");
    return a.width() / Rational(2 * (count - 1));
}

Rational gronwall_bound(const Rational& delta0, const Rational& lipschitz, const Rational& t)
{
    if (delta0.sign() < 0 || lipschitz.sign() < 0 || t.sign() < 0)
        throw std::invalid_argument("gronwall_bound needs nonnegative arguments");
    return delta0 * enclose_exp(lipschitz * t, tight()).hi();
}

bool EdgeResult::pass() const { return failures().empty(); }

std::vector<std::string> EdgeResult::failures() const
{
    std::vector<std::string> out;
    for (const auto& m : margins) {
        if (!m.margin.holds())
            out.push_back(edge + ": " + describe(m.margin));
        if (!m.chain.holds())
            out.push_back(edge + ": " + describe(m.chain));
    }
    for (const auto& f : facts)
        if (!f.holds())
            out.push_back(edge + ": " + describe(f));
    return out;
}

EdgeResult alpha_edge_check(const AlphaEdgeInput& in)
{
    EdgeResult r;
    r.edge = in.edge;
    const bool above = in.direction == EdgeDirection::Above;
    const Rational published_budget = budget_sum(in.budget, true);
    const Rational own_budget = budget_sum(in.budget, false);
    for (std::size_t j = 0; j < in.alpha.size(); ++j) {
        MarginCheck m;
        m.quantity = "alpha_" + std::to_string(j);
        m.value = in.alpha[j];
        m.target = in.half_pi;
        m.direction = in.direction;
        m.achieved = above ? in.alpha[j] - in.half_pi.hi() : in.half_pi.lo() - in.alpha[j];
        m.margin = check_greater(std::string(above ? "alpha_" : "pi/2 - alpha_") + std::to_string(j) +
                                     (above ? " - pi/2 > margin" : " > margin"),
                                 m.achieved, in.required_margin);
        m.chain = check_greater("margin > " + budget_label(in.budget), in.required_margin, published_budget);
        m.own_slack = m.achieved - own_budget;
        r.margins.push_back(std::move(m));
    }
    for (std::size_t j = 1; j < in.alpha.size(); ++j)
        r.facts.push_back(check_less("alpha_" + std::to_string(j - 1) + " < alpha_" + std::to_string(j),
                                     in.alpha[j - 1], in.alpha[j]));
    for (const auto& b : in.budget)
        r.facts.push_back(check_less_equal(b.name + " within its published bound", b.own, b.published));
    return r;
}

EdgeResult theta_edge_check(const ThetaEdgeInput& in)
{
    EdgeResult r;
    r.edge = in.edge;
    const bool above = in.direction == EdgeDirection::Above;
    if (in.theta.empty())
        throw std::invalid_argument("empty theta sequence");
    const long k = static_cast<long>(in.theta.size()) - 1;

    long decreasing = 0;
    long flat = 0;
    for (std::size_t i = 1; i < in.theta.size(); ++i) {
        if (in.theta[i] < in.theta[i - 1])
            ++decreasing;
        else if (in.theta[i] == in.theta[i - 1])
            ++flat;
    }
    r.facts.push_back(check_equal("theta non-decreasing (decreasing steps)", Rational(decreasing), Rational(0)));
    r.notes.push_back(std::to_string(flat) + " steps leave theta unchanged");

    // Every t in [t1, t2] lies within h/2 of some index in [i_lo, i_hi].
    const long i_lo = floor(in.window.lo() / in.step).get_si();
    const long i_hi = ceil(in.window.hi() / in.step).get_si();
    r.facts.push_back(check_less_equal("i_lo h <= t1", in.step * Rational(i_lo), in.window.lo()));
    r.facts.push_back(check_less_equal("t2 <= i_hi h", in.window.hi(), in.step * Rational(i_hi)));
    r.facts.push_back(check_less_equal("i_hi <= k", Rational(i_hi), Rational(k)));
    if (i_lo < 0 || i_hi > k || i_lo > i_hi) {
        r.notes.push_back("time window not covered by the run");
        return r;
    }
    if (in.published_window_start)
        r.facts.push_back(check_equal("window start index", Rational(i_lo), Rational(*in.published_window_start)));
    if (in.published_window_value)
        r.facts.push_back(check_equal("theta at the window start", in.theta[static_cast<std::size_t>(i_lo)],
                                      *in.published_window_value));

    const auto first = in.theta.begin() + i_lo;
    const auto last = in.theta.begin() + i_hi + 1;
    const auto extreme = above ? std::min_element(first, last) : std::max_element(first, last);
    const long where = static_cast<long>(extreme - in.theta.begin());

    const Rational interp_own = in.f2_bound * in.step / 2;
    r.facts.push_back(check_less("|theta'| h/2 < interpolation bound", interp_own, in.interpolation));

    std::vector<BudgetItem> budget = in.budget;
    budget.push_back({"interpolation", in.interpolation, interp_own});

    MarginCheck m;
    m.quantity = "theta_" + std::to_string(where);
    m.value = *extreme;
    m.target = in.quarter_pi;
    m.direction = in.direction;
    m.achieved = above ? *extreme - in.quarter_pi.hi() : in.quarter_pi.lo() - *extreme;
    m.margin = check_greater(above ? "min theta_i - pi/4 > margin" : "pi/4 - max theta_i > margin", m.achieved,
                             in.required_margin);
    m.chain = check_greater("margin > " + budget_label(budget), in.required_margin, budget_sum(budget, true));
    m.own_slack = m.achieved - budget_sum(budget, false);
    r.margins.push_back(std::move(m));
    for (const auto& b : in.budget)
        r.facts.push_back(check_less_equal(b.name + " within its published bound", b.own, b.published));
    r.notes.push_back("window indices " + std::to_string(i_lo) + " .. " + std::to_string(i_hi) + ", extreme at " +
                      std::to_string(where));
    return r;
}

std::string_view to_string(RectangleEdge e)
{
    switch (e) {
    case RectangleEdge::TimeLow: return "t = t1";
    case RectangleEdge::TimeHigh: return "t = t2";
    case RectangleEdge::ParamLow: return "a = a1";
    case RectangleEdge::ParamHigh: return "a = a2";
    }
    return "?";
}

MirandaVerdict miranda_conclude(const std::vector<EdgeVerdict>& edges, const MirandaRectangle& rect)
{
    rect.validate();
    struct Need {
        RectangleEdge edge;
        char function;
        int sign;
    };
    const Need needs[] = {{RectangleEdge::TimeLow, 'F', +1},
                          {RectangleEdge::TimeHigh, 'F', -1},
                          {RectangleEdge::ParamLow, 'G', -1},
                          {RectangleEdge::ParamHigh, 'G', +1}};
    MirandaVerdict v;
    for (const auto& need : needs) {
        const auto it = std::find_if(edges.begin(), edges.end(), [&](const EdgeVerdict& e) {
            return e.edge == need.edge && e.function == need.function;
        });
        const std::string name = std::string(to_string(need.edge)) + " edge";
        const std::string want = std::string(1, need.function) + (need.sign > 0 ? " > 0" : " < 0");
        if (it == edges.end())
            v.reasons.push_back(name + ": no verdict for " + want);
        else if (!it->verified || it->sign == 0)
            v.reasons.push_back(name + ": sign of " + std::string(1, need.function) + " not established");
        else if (it->sign != need.sign)
            v.reasons.push_back(name + " sign violated: expected " + want);
    }
    v.exists = v.reasons.empty();
    return v;
}

std::vector<EdgeVerdict> interval_edge_verdicts(const IntervalFunction2& f, const IntervalFunction2& g,
                                                const MirandaRectangle& rect)
{
    rect.validate();
    constexpr int pieces = 64;
    auto sign_on = [&](const IntervalFunction2& fn, bool along_a, const Rational& fixed) {
        const RationalInterval& side = along_a ? rect.a : rect.t;
        const Rational d = side.width() / Rational(pieces);
        int sign = 0;
        for (int p = 0; p < pieces; ++p) {
            const RationalInterval seg(side.lo() + d * Rational(p), side.lo() + d * Rational(p + 1));
            const RationalInterval v = along_a ? fn(seg, RationalInterval(fixed)) : fn(RationalInterval(fixed), seg);
            const int s = v.positive() ? 1 : v.negative() ? -1 : 0;
            if (s == 0 || (sign != 0 && s != sign))
                return 0;
            sign = s;
        }
        return sign;
    };
    std::vector<EdgeVerdict> out;
    auto add = [&](RectangleEdge e, char fn, int s) { out.push_back({e, fn, s, s != 0}); };
    add(RectangleEdge::TimeLow, 'F', sign_on(f, true, rect.t.lo()));
    add(RectangleEdge::TimeHigh, 'F', sign_on(f, true, rect.t.hi()));
    add(RectangleEdge::ParamLow, 'G', sign_on(g, false, rect.a.lo()));
    add(RectangleEdge::ParamHigh, 'G', sign_on(g, false, rect.a.hi()));
    return out;
}

bool ProofConfig::tables_applicable() const
{
    const auto pub = MirandaRectangle::published();
    return steps == 25000 && samples == 16 && resolution == Rational::pow10(-10) && rect.a == pub.a &&
           rect.t == pub.t;
}

namespace {

json constants_json(const CmcConstants& c)
{
    json box = json::array();
    for (const auto& ax : c.u1.axes())
        box.push_back(interval_pair(ax));
    json jac = json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < 3; ++j)
            row.push_back(c.jacobian_bounds(i, j).str());
        jac.push_back(row);
    }
    auto strs = [](const RationalVector& v) {
        json a = json::array();
        for (const auto& x : v)
            a.push_back(x.str());
        return a;
    };
    return {{"u1", box},
            {"epsilon", c.epsilon.str()},
            {"f_bounds", strs(c.f_bounds)},
            {"jacobian_bounds", jac},
            {"k0", c.k0.str()},
            {"m0", c.m0.str()},
            {"m", strs(c.m)}};
}

json thresholds_json(const PublishedThresholds& t)
{
    return {{"alpha_margin_early", t.alpha_margin_early.str()},
            {"alpha_margin_late", t.alpha_margin_late.str()},
            {"theta_margin_low", t.theta_margin_low.str()},
            {"theta_margin_high", t.theta_margin_high.str()},
            {"gronwall_early", t.gronwall_early.str()},
            {"gronwall_late", t.gronwall_late.str()},
            {"interpolation", t.interpolation.str()},
            {"rtm_error", t.rtm_error.str()},
            {"initial_rounding", t.initial_rounding.str()},
            {"theta_window_start", t.theta_window_start},
            {"theta_window_value", t.theta_window_value.str()}};
}

}  // namespace

json ProofConfig::to_json() const
{
    return {
        {"field", "cmc-s4"},
        {"initial", {"pi/2", "a", "pi"}},
        {"a", interval_pair(rect.a)},
        {"t", interval_pair(rect.t)},
        {"samples", samples},
        {"steps", steps},
        {"order", 1},
        {"resolution", resolution.str()},
        {"h", {(rect.t.lo() / Rational(steps)).str(), (rect.t.hi() / Rational(steps)).str()}},
        {"constants_source", derived_constants ? "derived" : "published"},
        {"constants", constants_json(constants)},
        {"thresholds", thresholds_json(thresholds)},
    };
}

json to_json(const Inequality& q)
{
    return {{"label", q.label},
            {"lhs", q.lhs.str()},
            {"relation", std::string(to_string(q.relation))},
            {"rhs", q.rhs.str()},
            {"slack", q.slack().str()},
            {"holds", q.holds()}};
}

json to_json(const RationalInterval& v) { return interval_pair(v); }

json to_json(const LemmaReport& r)
{
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back(to_json(c));
    json ranges = json::object();
    for (const auto& [name, v] : r.ranges)
        ranges[name] = to_json(v);
    return {{"name", r.name}, {"passed", r.passed()}, {"checks", checks}, {"ranges", ranges}, {"notes", r.notes}};
}

namespace {

json bound_json(const ErrorBound& e)
{
    return {{"tilde_r", e.tilde_r.str()},
            {"truncation_term", e.truncation_term.str()},
            {"rounding_term", e.rounding_term.str()},
            {"growth", e.growth.str()},
            {"lipschitz", e.lipschitz.str()},
            {"m_upper", e.m_upper.str()},
            {"sqrt_n_upper", e.sqrt_n_upper.str()},
            {"hypothesis", rtm::to_json(e.hypothesis)}};
}

json edge_json(const EdgeResult& r)
{
    json margins = json::array();
    for (const auto& m : r.margins)
        margins.push_back({{"quantity", m.quantity},
                           {"value", m.value.str()},
                           {"target", interval_pair(m.target)},
                           {"direction", m.direction == EdgeDirection::Above ? "above" : "below"},
                           {"achieved", m.achieved.str()},
                           {"margin", rtm::to_json(m.margin)},
                           {"chain", rtm::to_json(m.chain)},
                           {"own_slack", m.own_slack.str()},
                           {"pass", m.pass()}});
    json facts = json::array();
    for (const auto& f : r.facts)
        facts.push_back(rtm::to_json(f));
    return {{"edge", r.edge}, {"pass", r.pass()}, {"margins", margins}, {"facts", facts}, {"notes", r.notes}};
}

json run_json(const RunSummary& s)
{
    json end = json::array();
    for (const auto& x : s.endpoint)
        end.push_back(x.str());
    json mono = json::array();
    for (const auto& m : s.monotone)
        mono.push_back(m.strictly_increasing ? "increasing" : m.strictly_decreasing ? "decreasing" : "neither");
    json j = {{"sample", s.sample},
              {"a", s.a.str()},
              {"h", s.step.str()},
              {"endpoint", end},
              {"monotone", mono},
              {"refined_steps", s.refined_steps}};
    json hull = json::array();
    for (const auto& v : s.hull)
        hull.push_back(interval_pair(v));
    j["hull"] = hull;
    j["box_exit"] = s.box_exit ? json(*s.box_exit) : json(nullptr);
    if (!s.error.empty())
        j["error"] = s.error;
    return j;
}

RunSummary run_sample(const ProofConfig& cfg, const Box& u1, int sample, const Rational& a, const Rational& t, bool keep_theta)
{
    RunSummary s;
    s.sample = sample;
    s.a = a;
    s.step = t / Rational(cfg.steps);

    RTMConfig rc;
    rc.field = cmc_field();
    rc.order = 1;
    rc.step = s.step;
    rc.steps = cfg.steps;
    rc.grid = GridSpec(cfg.resolution);
    rc.initial = {InitialValue::pi_multiple(Rational(BigInt(1), BigInt(2))), InitialValue::exact(a),
                  InitialValue::pi_multiple(Rational(1))};

    RunChecks checks;
    checks.box = u1;
    checks.box_hard = false;
    checks.keep_points = false;
    if (keep_theta) {
        s.theta.reserve(static_cast<std::size_t>(cfg.steps) + 1);
        checks.on_step = [&](long, const RationalVector& z) { s.theta.push_back(z[1]); };
    }
    try {
        Trajectory tr = rtm_run(rc, checks);
        s.endpoint = std::move(tr.final_point);
        s.monotone = std::move(tr.monotone);
        s.refined_steps = tr.refined_steps;
        s.box_exit = tr.first_box_exit;
        s.hull = std::move(tr.hull);
    } catch (const std::exception& e) {
        s.error = e.what();
    }
    return s;
}

TableComparison compare_tables(const std::vector<RunSummary>& early, const std::vector<RunSummary>& late)
{
    TableComparison c;
    c.compared = true;
    static const char* names[] = {"r", "theta", "alpha"};
    auto one = [&](const std::vector<RunSummary>& runs, const EndpointTable& table, const char* label) {
        for (std::size_t j = 0; j < table.size(); ++j) {
            for (std::size_t i = 0; i < 3; ++i) {
                ++c.total;
                const Rational expected = Rational::parse(table[j][i]);
                const RunSummary& s = runs.at(j);
                if (s.endpoint.size() == 3 && s.endpoint[i] == expected) {
                    ++c.matches;
                    continue;
                }
                c.mismatches.push_back(std::string(label) + " j=" + std::to_string(j) + " " + names[i] + ": got " +
                                       (s.endpoint.size() == 3 ? s.endpoint[i].str() : std::string("(no value)")) +
                                       ", expected " + expected.str());
            }
        }
    };
    one(early, kTableAt3966, "t=0.3966");
    one(late, kTableAt3991, "t=0.3991");
    return c;
}

}  // namespace

ProofCertificate run_full_proof(const ProofConfig& cfg)
{
    cfg.rect.validate();
    if (cfg.steps < 1)
        throw ConfigError("steps must be positive");
    if (cfg.samples < 2)
        throw ConfigError("need at least two samples");

    ProofCertificate cert;
    cert.config = cfg.to_json();
    cert.config_hash = sha256_hex(cert.config.dump());
    cert.constants = cfg.derived_constants ? derive_constants(cfg.constants.u1, cfg.constants.epsilon)
                                           : cfg.constants;
    cert.thresholds = cfg.thresholds;
    const CmcConstants& c = cert.constants;
    PublishedThresholds& th = cert.thresholds;

    cert.lemmas = cfg.derived_constants ? std::vector<LemmaReport>{verify_constants(c)} : verify_all_lemmas(c);

    // The 2 x samples rounded Euler runs.
    const auto a = sample_points(cfg.rect.a, cfg.samples);
    const std::size_t n = a.size();
    cert.runs_early.resize(n);
    cert.runs_late.resize(n);
    parallel_for(2 * n, resolve_jobs(cfg.jobs), [&](std::size_t i) {
        const bool late = i >= n;
        const std::size_t j = late ? i - n : i;
        const bool keep = late && (j == 0 || j == n - 1);
        RunSummary s = run_sample(cfg, c.u1, static_cast<int>(j), a[j], late ? cfg.rect.t.hi() : cfg.rect.t.lo(), keep);
        (late ? cert.runs_late : cert.runs_early)[j] = std::move(s);
    });

    if (cfg.tables_applicable())
        cert.tables = compare_tables(cert.runs_early, cert.runs_late);

    // Global error bounds for both step sizes.
    const BoundSet bounds{c.m0, c.m, {c.k0}, c.epsilon};
    const Rational h_early = cfg.rect.t.lo() / Rational(cfg.steps);
    const Rational h_late = cfg.rect.t.hi() / Rational(cfg.steps);
    cert.bound_early = compute_error_bound(bounds, 3, 1, h_early, cfg.steps, cfg.resolution);
    cert.bound_late = compute_error_bound(bounds, 3, 1, h_late, cfg.steps, cfg.resolution);
    if (cfg.derived_constants)
        th.rtm_error = strictly_above(max(cert.bound_early.tilde_r, cert.bound_late.tilde_r), Rational::pow10(-7));
    cert.error_checks = {
        check_less("R~ (h = t1/k) < bound", cert.bound_early.tilde_r, th.rtm_error),
        check_less("R~ (h = t2/k) < bound", cert.bound_late.tilde_r, th.rtm_error),
        cert.bound_early.hypothesis,
        cert.bound_late.hypothesis,
    };
    cert.error_checks[2].label += " (h = t1/k)";
    cert.error_checks[3].label += " (h = t2/k)";

    // Gronwall propagation from the nearest sample, and the effect of
    // starting from the grid-rounded initial point.
    const Rational delta0 = sample_half_spacing(cfg.rect.a, cfg.samples);
    cert.gronwall_early = gronwall_bound(delta0, c.k0, cfg.rect.t.lo());
    cert.gronwall_late = gronwall_bound(delta0, c.k0, cfg.rect.t.hi());
    const Rational z0_offset = sqrt_upper(Rational(3), Rational::pow10(-12)) * cfg.resolution;
    cert.initial_rounding_early = gronwall_bound(z0_offset, c.k0, cfg.rect.t.lo());
    cert.initial_rounding_late = gronwall_bound(z0_offset, c.k0, cfg.rect.t.hi());
    if (cfg.derived_constants) {
        th.gronwall_early = strictly_above(cert.gronwall_early, Rational::pow10(-6));
        th.gronwall_late = strictly_above(cert.gronwall_late, Rational::pow10(-6));
        th.initial_rounding = strictly_above(cert.initial_rounding_late, Rational::pow10(-10));
    }
    cert.gronwall_checks = {
        check_less("Gronwall at t1 < bound", cert.gronwall_early, th.gronwall_early),
        check_less("Gronwall at t2 < bound", cert.gronwall_late, th.gronwall_late),
        check_less("initial rounding at t1 < bound", cert.initial_rounding_early, th.initial_rounding),
        check_less("initial rounding at t2 < bound", cert.initial_rounding_late, th.initial_rounding),
    };

    cert.pi = enclose_pi(tight());
    const RationalInterval half_pi = cert.pi * RationalInterval(Rational(BigInt(1), BigInt(2)));
    const RationalInterval quarter_pi = cert.pi * RationalInterval(Rational(BigInt(1), BigInt(4)));

    bool runs_ok = true;
    for (const auto* runs : {&cert.runs_early, &cert.runs_late})
        for (const auto& s : *runs)
            if (!s.error.empty()) {
                runs_ok = false;
                cert.reasons.push_back("run a_" + std::to_string(s.sample) + " (h = " + s.step.str() +
                                       "): " + s.error);
            } else if (s.box_exit) {
                cert.reasons.push_back("run a_" + std::to_string(s.sample) + " (h = " + s.step.str() +
                                       ") left U1 at step " + std::to_string(*s.box_exit));
            }

    // Range of every iterate of every run against U1.
    if (runs_ok) {
        std::vector<RationalInterval> all;
        for (const auto* runs : {&cert.runs_early, &cert.runs_late})
            for (const auto& s : *runs)
                for (std::size_t i = 0; i < s.hull.size(); ++i)
                    if (all.size() <= i)
                        all.push_back(s.hull[i]);
                    else
                        all[i] = hull(all[i], s.hull[i]);
        static const char* names[] = {"r", "theta", "alpha"};
        for (std::size_t i = 0; i < all.size() && i < 3; ++i) {
            const std::string b = std::to_string(i + 1);
            cert.box_checks.push_back(
                check_greater_equal(std::string("min ") + names[i] + " >= b" + b, all[i].lo(), c.u1[i].lo()));
            cert.box_checks.push_back(
                check_less_equal(std::string("max ") + names[i] + " <= c" + b, all[i].hi(), c.u1[i].hi()));
        }
    }

    if (runs_ok) {
        auto alphas = [](const std::vector<RunSummary>& runs) {
            std::vector<Rational> out;
            for (const auto& s : runs)
                out.push_back(s.endpoint[2]);
            return out;
        };
        const std::string t1 = "t = " + cfg.rect.t.lo().str();
        const std::string t2 = "t = " + cfg.rect.t.hi().str();
        cert.edges.push_back(alpha_edge_check(
            {t1,
             alphas(cert.runs_early),
             EdgeDirection::Above,
             th.alpha_margin_early,
             {{"R~", th.rtm_error, cert.bound_early.tilde_r},
              {"Gronwall", th.gronwall_early, cert.gronwall_early},
              {"initial rounding", th.initial_rounding, cert.initial_rounding_early}},
             half_pi}));
        cert.edges.push_back(alpha_edge_check(
            {t2,
             alphas(cert.runs_late),
             EdgeDirection::Below,
             th.alpha_margin_late,
             {{"R~", th.rtm_error, cert.bound_late.tilde_r},
              {"Gronwall", th.gronwall_late, cert.gronwall_late},
              {"initial rounding", th.initial_rounding, cert.initial_rounding_late}},
             half_pi}));

        const std::vector<BudgetItem> theta_budget = {
            {"R~", th.rtm_error, cert.bound_late.tilde_r},
            {"initial rounding", th.initial_rounding, cert.initial_rounding_late}};
        const bool pub = cfg.tables_applicable();
        ThetaEdgeInput low{"a = " + cfg.rect.a.lo().str(),
                           cert.runs_late.front().theta,
                           h_late,
                           cfg.rect.t,
                           EdgeDirection::Below,
                           th.theta_margin_low,
                           c.f_bounds.at(1),
                           th.interpolation,
                           theta_budget,
                           quarter_pi,
                           std::nullopt,
                           std::nullopt};
        ThetaEdgeInput high = low;
        high.edge = "a = " + cfg.rect.a.hi().str();
        high.theta = cert.runs_late.back().theta;
        high.direction = EdgeDirection::Above;
        high.required_margin = th.theta_margin_high;
        if (pub) {
            high.published_window_start = th.theta_window_start;
            high.published_window_value = th.theta_window_value;
        }
        cert.edges.push_back(theta_edge_check(low));
        cert.edges.push_back(theta_edge_check(high));

        const RectangleEdge order[] = {RectangleEdge::TimeLow, RectangleEdge::TimeHigh, RectangleEdge::ParamLow,
                                       RectangleEdge::ParamHigh};
        const int signs[] = {+1, -1, -1, +1};
        std::vector<EdgeVerdict> verdicts;
        for (int i = 0; i < 4; ++i) {
            const bool ok = cert.edges[static_cast<std::size_t>(i)].pass();
            verdicts.push_back({order[i], i < 2 ? 'F' : 'G', ok ? signs[i] : 0, ok});
        }
        cert.miranda = miranda_conclude(verdicts, cfg.rect);
    } else {
        cert.miranda.reasons.push_back("edge checks skipped: not every run completed");
    }

    cert.notes = {
        "z_0 is the grid-rounded initial point (pi/2, a_j, pi); its effect is carried by the initial rounding term "
        "sqrt(3) R e^{K0 t}.",
        "The theta interpolation uses the bound on |f_2| = |sin a / sin r|, the theta component of the field.",
        "alpha at t between samples is bounded by Gronwall from the nearest sample, half spacing " + delta0.str() +
            ".",
    };
    for (const auto& q : cert.box_checks)
        if (!q.holds()) {
            cert.notes.push_back("The iterates leave U1, so the bound constants do not cover them. Rerun with a box that "
                                 "contains the hull of the iterates and --constants derived to re-derive every constant.");
            break;
        }
    if (cfg.derived_constants)
        cert.notes.push_back("Bound constants derived on U1 by interval evaluation; budget constants (R~, Gronwall, "
                             "initial rounding) are rounded-up values of the computed bounds.");
    if (!cfg.tables_applicable())
        cert.notes.push_back("Endpoint table comparison skipped: the configuration differs from the tabulated one.");

    for (const auto& l : cert.lemmas)
        for (const auto& f : l.failures())
            cert.reasons.push_back(l.name + ": " + f);
    for (const auto& m : cert.tables.mismatches)
        cert.reasons.push_back("table mismatch " + m);
    for (const auto* list : {&cert.box_checks, &cert.error_checks, &cert.gronwall_checks})
        for (const auto& q : *list)
            if (!q.holds())
                cert.reasons.push_back(q.label.find("epsilon") != std::string::npos ? "hypothesis-violated: " +
                                                                                          describe(q)
                                                                                    : describe(q));
    for (const auto& e : cert.edges)
        for (const auto& f : e.failures())
            cert.reasons.push_back(f);
    for (const auto& r : cert.miranda.reasons)
        cert.reasons.push_back("Miranda: " + r);
    cert.verdict = cert.reasons.empty() && cert.miranda.exists;
    return cert;
}

json ProofCertificate::to_json(bool with_timestamp) const
{
    json j;
    j["config"] = config;
    j["config_hash"] = config_hash;
    if (with_timestamp)
        j["generated_at"] = utc_timestamp();

    j["constants"] = constants_json(constants);
    j["budget_constants"] = thresholds_json(thresholds);

    json lem = json::array();
    for (const auto& l : lemmas)
        lem.push_back(rtm::to_json(l));
    j["lemmas"] = lem;

    json box = json::array();
    for (const auto& q : box_checks)
        box.push_back(rtm::to_json(q));
    j["box"] = box;

    json early = json::array(), late = json::array();
    for (const auto& s : runs_early)
        early.push_back(run_json(s));
    for (const auto& s : runs_late)
        late.push_back(run_json(s));
    j["tables"] = {{"compared", tables.compared},
                   {"matches", tables.matches},
                   {"total", tables.total},
                   {"mismatches", tables.mismatches},
                   {"runs_t1", early},
                   {"runs_t2", late}};

    json checks = json::array();
    for (const auto& q : error_checks)
        checks.push_back(rtm::to_json(q));
    j["error_bounds"] = {{"h_t1", bound_json(bound_early)}, {"h_t2", bound_json(bound_late)}, {"checks", checks}};

    json gchecks = json::array();
    for (const auto& q : gronwall_checks)
        gchecks.push_back(rtm::to_json(q));
    j["gronwall"] = {{"t1", gronwall_early.str()},
                     {"t2", gronwall_late.str()},
                     {"initial_rounding_t1", initial_rounding_early.str()},
                     {"initial_rounding_t2", initial_rounding_late.str()},
                     {"checks", gchecks}};

    json edges_json = json::array();
    for (const auto& e : edges)
        edges_json.push_back(edge_json(e));
    j["margins"] = {{"pi", interval_pair(pi)}, {"edges", edges_json}};
    j["miranda"] = {{"exists", miranda.exists}, {"reasons", miranda.reasons}};
    j["notes"] = notes;
    j["verdict"] = {{"pass", verdict}, {"reasons", reasons}};
    return j;
}

void print_summary(std::ostream& os, const ProofCertificate& cert)
{
    auto row = [&](const Inequality& q) {
        os << "  " << (q.holds() ? "ok  " : "FAIL") << "  " << std::left << std::setw(44) << q.label << std::right
           << " lhs " << dec(q.lhs, 10) << "  rhs " << dec(q.rhs, 10) << "  slack " << dec(q.slack(), 10) << '\n';
    };
    os << "config hash " << cert.config_hash << '\n';
    os << "lemmas\n";
    for (const auto& l : cert.lemmas)
        os << "  " << (l.passed() ? "ok  " : "FAIL") << "  " << l.name << " (" << l.checks.size() << " checks)\n";
    os << "endpoint tables: ";
    if (cert.tables.compared)
        os << cert.tables.matches << "/" << cert.tables.total << " entries reproduced\n";
    else
        os << "not compared\n";
    os << "iterates against U1 (decimals truncated, for reading only)\n";
    for (const auto& q : cert.box_checks)
        row(q);
    os << "error bounds\n";
    for (const auto& q : cert.error_checks)
        row(q);
    for (const auto& q : cert.gronwall_checks)
        row(q);
    os << "edge margins\n";
    for (const auto& e : cert.edges) {
        os << "  [" << e.edge << "] " << (e.pass() ? "pass" : "FAIL") << '\n';
        const MarginCheck* worst = nullptr;
        for (const auto& m : e.margins)
            if (!worst || m.margin.slack() < worst->margin.slack())
                worst = &m;
        if (worst) {
            row(worst->margin);
            row(worst->chain);
            os << "        own error budget slack " << dec(worst->own_slack, 10) << '\n';
        }
    }
    os << "Miranda: " << (cert.miranda.exists ? "zero exists in the rectangle" : "not concluded") << '\n';
    os << "verdict: " << (cert.verdict ? "PASS" : "FAIL") << '\n';
    for (const auto& r : cert.reasons)
        os << "  - " << r << '\n';
}

}  // namespace rtm
