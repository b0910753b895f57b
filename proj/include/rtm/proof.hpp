#pragma once

// Computer-assisted existence proof for the CMC hypertorus profile curve:
// 32 Round Taylor runs, the published endpoint tables, global error bounds,
// Gronwall propagation between sample points, margin checks on the four
// edges of the (a, t) rectangle, and the Poincare-Miranda conclusion.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtm/cmc.hpp"
#include "rtm/round_taylor.hpp"

namespace rtm {

struct MirandaRectangle {
    RationalInterval a;  // initial theta
    RationalInterval t;  // time

    /// [5204/10^4, 5244/10^4] x [3966/10^4, 3991/10^4]
    static MirandaRectangle published();
    /// Throws std::invalid_argument unless both sides have positive length.
    void validate() const;
};

/// a_j = a_lo + j (a_hi - a_lo)/(count - 1), j = 0 .. count-1.
std::vector<Rational> sample_points(const RationalInterval& a, int count);
/// Largest distance from any a in the interval to its nearest sample.
Rational sample_half_spacing(const RationalInterval& a, int count);

/// Upper bound of delta0 e^{K t}.
Rational gronwall_bound(const Rational& delta0, const Rational& lipschitz, const Rational& t);

enum class EdgeDirection { Above, Below };

struct MarginCheck {
    std::string quantity;
    Rational value;             // the computed grid rational
    RationalInterval target;    // enclosure of pi/2 or pi/4
    EdgeDirection direction = EdgeDirection::Above;
    Rational achieved;          // rigorous lower bound of the signed distance
    Inequality margin;          // achieved > required
    Inequality chain;           // required > error budget
    Rational own_slack;         // achieved - (own error bounds), informational

    bool pass() const { return margin.holds() && chain.holds(); }
};

struct EdgeResult {
    std::string edge;
    std::vector<MarginCheck> margins;
    std::vector<Inequality> facts;  // orderings, window arithmetic, bound checks
    std::vector<std::string> notes;

    bool pass() const;
    std::vector<std::string> failures() const;
};

/// Error budget items entering a chain: the published constant and our own
/// rigorous value for each.
struct BudgetItem {
    std::string name;
    Rational published;
    Rational own;
};

struct AlphaEdgeInput {
    std::string edge;                 // e.g. "t = 3966/10000"
    std::vector<Rational> alpha;      // endpoint alpha for each sample a_j
    EdgeDirection direction;          // Above at the early time, Below at the late one
    Rational required_margin;
    std::vector<BudgetItem> budget;   // R~, Gronwall, z0 term
    RationalInterval half_pi;
};

/// For every sample: alpha_j on the required side of pi/2 by more than the
/// margin, and the margin larger than the budget; plus the strict ordering
/// alpha_0 < alpha_1 < ... of the samples.
EdgeResult alpha_edge_check(const AlphaEdgeInput& in);

struct ThetaEdgeInput {
    std::string edge;                  // e.g. "a = 5204/10000"
    std::vector<Rational> theta;       // theta_0 .. theta_k of one run
    Rational step;                     // h of that run
    RationalInterval window;           // [t1, t2]
    EdgeDirection direction;           // Below on the a1 edge, Above on the a2 edge
    Rational required_margin;
    Rational f2_bound;                 // sup |theta'| on U2
    Rational interpolation;            // published bound on f2_bound h/2
    std::vector<BudgetItem> budget;    // R~, z0 term (interpolation is added)
    RationalInterval quarter_pi;
    std::optional<long> published_window_start;
    std::optional<Rational> published_window_value;
};

/// Monotonicity of the theta sequence (recorded; the extreme over the
/// window is computed directly), the index window covering
/// [t1, t2], the extreme theta over that window against pi/4, and the time
/// interpolation bound.
EdgeResult theta_edge_check(const ThetaEdgeInput& in);

enum class RectangleEdge { TimeLow, TimeHigh, ParamLow, ParamHigh };
std::string_view to_string(RectangleEdge e);

struct EdgeVerdict {
    RectangleEdge edge;
    char function = 'F';  // 'F' (alpha - pi/2) or 'G' (theta - pi/4)
    int sign = 0;         // established sign on the whole edge, 0 if none
    bool verified = false;
};

struct MirandaVerdict {
    bool exists = false;
    std::vector<std::string> reasons;
};

/// Poincare-Miranda in two variables: F > 0 on t = t1, F < 0 on t = t2,
/// G < 0 on a = a1, G > 0 on a = a2 imply a common zero inside.
MirandaVerdict miranda_conclude(const std::vector<EdgeVerdict>& edges, const MirandaRectangle& rect);

/// Edge verdicts for F, G given as interval extensions over boxes (a, t).
using IntervalFunction2 = std::function<RationalInterval(const RationalInterval& a, const RationalInterval& t)>;
std::vector<EdgeVerdict> interval_edge_verdicts(const IntervalFunction2& f, const IntervalFunction2& g,
                                                const MirandaRectangle& rect);

struct PublishedThresholds {
    Rational alpha_margin_early = Rational::parse("0.00264");
    Rational alpha_margin_late = Rational::parse("0.002601");
    Rational theta_margin_low = Rational::parse("0.00045");
    Rational theta_margin_high = Rational::parse("0.000375");
    Rational gronwall_early = Rational::parse("0.001998");
    Rational gronwall_late = Rational::parse("0.00204");
    Rational interpolation = Rational::parse("0.00001");
    Rational rtm_error = Rational::parse("0.0003048");
    Rational initial_rounding = Rational::parse("3e-9");
    long theta_window_start = 24843;
    Rational theta_window_value = Rational::parse("7857740589/10000000000");
};

struct ProofConfig {
    MirandaRectangle rect = MirandaRectangle::published();
    int samples = 16;
    long steps = 25000;
    Rational resolution = Rational::pow10(-10);
    CmcConstants constants = CmcConstants::published();
    PublishedThresholds thresholds;
    /// Replace the published bound constants by ones derived on
    /// constants.u1 (derive_constants) and the published error-budget
    /// constants by rounded-up values of our own bounds. Margin thresholds
    /// are kept.
    bool derived_constants = false;
    unsigned jobs = 0;  // 0: RTM_JOBS, else hardware concurrency

    /// The published tables only apply to the published configuration.
    bool tables_applicable() const;
    /// Everything that determines the result; jobs is left out.
    nlohmann::json to_json() const;
};

struct RunSummary {
    int sample = 0;
    Rational a;
    Rational step;
    RationalVector endpoint;
    std::vector<Monotonicity> monotone;
    long refined_steps = 0;
    std::string error;  // empty when the run completed
    std::optional<long> box_exit;          // first step outside U1
    std::vector<RationalInterval> hull;    // range of every coordinate over the run
    std::vector<Rational> theta;  // kept for the two corner runs at the late time
};

struct TableComparison {
    bool compared = false;
    int matches = 0;
    int total = 0;
    std::vector<std::string> mismatches;
};

struct ProofCertificate {
    nlohmann::json config;
    std::string config_hash;
    CmcConstants constants;          // the constants actually used
    PublishedThresholds thresholds;  // the budget constants actually used
    std::vector<LemmaReport> lemmas;
    std::vector<Inequality> box_checks;  // hull of all iterates against U1
    std::vector<RunSummary> runs_early;
    std::vector<RunSummary> runs_late;
    TableComparison tables;
    ErrorBound bound_early;
    ErrorBound bound_late;
    std::vector<Inequality> error_checks;
    Rational gronwall_early;
    Rational gronwall_late;
    Rational initial_rounding_early;
    Rational initial_rounding_late;
    std::vector<Inequality> gronwall_checks;
    RationalInterval pi;
    std::vector<EdgeResult> edges;
    MirandaVerdict miranda;
    std::vector<std::string> notes;
    std::vector<std::string> reasons;
    bool verdict = false;

    /// Sections config, lemmas, tables, error_bounds, gronwall, margins,
    /// miranda, notes, verdict. The timestamp is the only varying field.
    nlohmann::json to_json(bool with_timestamp = true) const;
};

ProofCertificate run_full_proof(const ProofConfig& cfg);

/// Human-readable margin and slack table.
void print_summary(std::ostream& os, const ProofCertificate& cert);

nlohmann::json to_json(const Inequality& q);
nlohmann::json to_json(const RationalInterval& v);
nlohmann::json to_json(const LemmaReport& r);

}  // namespace rtm
