#pragma once

// Rigorous rational enclosures of pi, sin, cos, cot, csc and exp.
//
// Values are computed with truncated Taylor series in fixed-point integer
// arithmetic, with every truncation and the series remainder accounted for
// in the returned bounds. Endpoints are dyadic rationals.
//
// Precision is organised in levels: level n works with 64 * 2^n bits. The
// public enclose_* functions walk the levels from 0 and intersect the
// results, so a request for a smaller width always returns a subset of the
// answer for a larger width.

#include <functional>
#include <optional>
#include <stdexcept>

#include "rtm/grid.hpp"
#include "rtm/interval.hpp"

namespace rtm {

struct RefinementExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleProximity : std::domain_error {
    using std::domain_error::domain_error;
};

struct GridTieUnresolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionRequest {
    Rational target_width;
    int max_refinements = 20;

    /// Throws std::invalid_argument unless width > 0 and max_refinements >= 0.
    static PrecisionRequest width(Rational w, int max_refinements = 20);
};

/// Working precision in bits for refinement level n.
unsigned level_bits(int level);

struct SinCos {
    RationalInterval sin;
    RationalInterval cos;
};

// Single-level kernels. Each call is a rigorous enclosure at the given
// precision; nothing is cached except pi.
RationalInterval pi_at(unsigned bits);
SinCos sin_cos_at(const Rational& x, unsigned bits);
RationalInterval exp_at(const Rational& x, unsigned bits);

RationalInterval enclose_pi(const PrecisionRequest& req);
RationalInterval enclose_sin(const Rational& x, const PrecisionRequest& req);
RationalInterval enclose_cos(const Rational& x, const PrecisionRequest& req);
/// Throws PoleProximity if sin(x) cannot be separated from 0.
RationalInterval enclose_cot(const Rational& x, const PrecisionRequest& req);
/// Throws PoleProximity if sin(x) cannot be separated from 0.
RationalInterval enclose_csc(const Rational& x, const PrecisionRequest& req);
RationalInterval enclose_exp(const Rational& x, const PrecisionRequest& req);

/// Walks refinement levels, intersecting successive enclosures, until the
/// width drops to the target. `eval` may return nullopt for a level it
/// cannot serve (a pole that is not yet separated, for instance).
RationalInterval refine_until(const PrecisionRequest& req,
                              const std::function<std::optional<RationalInterval>(int level)>& eval,
                              const char* what);

/// Grid-rounds a value known only through enclosures: returns R*floor(v/R)
/// once every point of the current enclosure has the same floor. `refine`
/// yields tighter enclosures, or nullopt when it has no budget left; after
/// `max_refinements` attempts a GridTieUnresolved is thrown.
Rational floor_of_enclosed(RationalInterval v, const GridSpec& grid,
                           const std::function<std::optional<RationalInterval>()>& refine,
                           int max_refinements = 20);

}  // namespace rtm
