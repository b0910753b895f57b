#pragma once

// The Round Taylor Method: order-m Taylor steps whose results are rounded
// down onto the lattice R * Z^n, so every iterate is an exact rational and
// the whole run is reproducible bit for bit.
//
//   y_{i+1} = z_i + f(z_i) h + F_1(z_i) h^2/2! + ... + F_{m-1}(z_i) h^m/m!
//   z_{i+1} = R floor(y_{i+1} / R)
//
// Fields with transcendental right-hand sides are evaluated through
// enclosures that are refined until the floor is decided, so the rounding
// is exact even though y_{i+1} is irrational.

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtm/enclosure.hpp"
#include "rtm/inequality.hpp"
#include "rtm/vector_field.hpp"

namespace rtm {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BoxViolation : std::runtime_error {
    BoxViolation(long step, const std::string& what) : std::runtime_error(what), step(step) {}
    long step;
};

/// A component of the initial state: an exact rational, or a rational
/// multiple of pi.
class InitialValue {
public:
    static InitialValue exact(Rational v) { return InitialValue(std::move(v), false); }
    static InitialValue pi_multiple(Rational coeff) { return InitialValue(std::move(coeff), true); }
    /// Rational literals, or "pi", "pi/2", "-pi", "3*pi/4", "0.5*pi".
    static InitialValue parse(std::string_view text);

    bool is_exact() const { return !pi_; }
    const Rational& exact_value() const;
    RationalInterval enclose(int level) const;
    std::string str() const;

private:
    InitialValue(Rational v, bool pi) : value_(std::move(v)), pi_(pi) {}
    Rational value_;
    bool pi_;
};

struct RTMConfig {
    FieldPtr field;
    int order = 1;
    Rational step;                 // h
    long steps = 0;                // k
    std::optional<GridSpec> grid;  // nullopt: no rounding (exact fields only)
    std::vector<InitialValue> initial;

    /// Throws ConfigError.
    void validate() const;
    Rational resolution() const { return grid ? grid->resolution() : Rational(0); }
};

/// z_0: the grid-rounded initial state (or the exact one without a grid).
RationalVector initial_point(const RTMConfig& cfg);

struct StepOutcome {
    RationalVector z;
    int refinements = 0;  // enclosure levels beyond the first
};

StepOutcome rtm_step_detailed(const RationalVector& z, const RTMConfig& cfg);
inline RationalVector rtm_step(const RationalVector& z, const RTMConfig& cfg) { return rtm_step_detailed(z, cfg).z; }

struct RunChecks {
    std::optional<Box> box;
    bool box_hard = true;        // BoxViolation when left; otherwise only recorded
    bool monotonicity = true;
    bool keep_points = true;
    /// Unrounded runs stop with std::overflow_error once a numerator or
    /// denominator needs more bits than this.
    std::size_t max_exact_bits = std::size_t{1} << 22;
    std::function<void(long, const RationalVector&)> on_step;
};

struct Monotonicity {
    bool strictly_increasing = true;
    bool strictly_decreasing = true;
    std::optional<long> first_non_increase;
};

struct Trajectory {
    std::string field;
    Rational step;
    long steps = 0;
    Rational resolution;  // 0 when unrounded
    std::vector<RationalVector> points;  // z_0 .. z_k when kept
    RationalVector final_point;
    std::vector<Monotonicity> monotone;  // per coordinate
    bool box_checked = false;
    std::optional<long> first_box_exit;    // first step outside the box (soft checks)
    std::vector<RationalInterval> hull;    // per-coordinate range of z_0 .. z_k
    long refined_steps = 0;
    int max_refinements = 0;
};

Trajectory rtm_run(const RTMConfig& cfg, const RunChecks& checks = {});

/// Writes step,t,u1..un; t as a decimal truncated to 12 places, states as num/den.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Constants feeding the global error bound.
struct BoundSet {
    Rational m0;             // |f_i| <= M0 on U2
    RationalVector m;        // |(F_m)_i| <= M_i on U2
    RationalVector k;        // |Df| <= K0, |DF_i| <= K_i
    Rational epsilon;        // U2 = U1 widened by epsilon

    /// L = K0 + K1 h/2! + ... + K_{m-1} h^{m-1}/(m-1)!
    Rational lipschitz(const Rational& h) const;
    /// Rational q >= sqrt(sum M_i^2).
    Rational m_upper() const;
};

struct ErrorBound {
    Rational tilde_r;          // rigorous upper bound of the global error
    Rational truncation_term;  // M h^m / (L (m+1)!)
    Rational rounding_term;    // sqrt(n) R / (L h)
    Rational growth;           // upper bound of e^{Lkh} - 1
    Rational lipschitz;        // L
    Rational m_upper;
    Rational sqrt_n_upper;
    Inequality hypothesis;     // epsilon > M0 h + R~

    bool hypothesis_holds() const { return hypothesis.holds(); }
};

ErrorBound compute_error_bound(const BoundSet& bounds, std::size_t dimension, int order, const Rational& h,
                               long steps, const Rational& resolution);
ErrorBound compute_error_bound(const BoundSet& bounds, const RTMConfig& cfg);

}  // namespace rtm
