#pragma once

// The profile-curve ODE of a CMC (H = -3) hypertorus in S^4,
//
//   r'     = cos a
//   theta' = sin a / sin r
//   a'     = 2 cot(2 theta) cos a / sin r - 3 cot r sin a - 3
//
// written with u = (r, theta, a) and the building blocks
// g1 = cos u3, g2 = sin u3, g3 = csc u1, g4 = cot u1, g5 = cot 2u2,
// g6 = csc^2 2u2 as f = (g1, g2 g3, -3 g2 g4 + 2 g1 g3 g5 - 3).

#include <array>
#include <string>
#include <vector>

#include "rtm/inequality.hpp"
#include "rtm/range.hpp"
#include "rtm/vector_field.hpp"

namespace rtm {

class CmcField : public VectorField {
public:
    std::string_view name() const override { return "cmc-s4"; }
    std::size_t dimension() const override { return 3; }
    bool exact_rational() const override { return false; }
    std::optional<IntervalVector> enclose(const RationalVector& u, int level) const override;
    IntervalVector f_range(const Box& box) const override;
    /// Entries hard-coded from the symbolic Jacobian in terms of g1..g6.
    IntervalMatrix jacobian_range(const Box& box) const override;
};

FieldPtr cmc_field();

/// f(u) enclosed to at least the requested width. Throws PoleProximity if
/// sin u1 or sin 2u2 cannot be separated from zero.
IntervalVector cmc_f_enclose(const RationalVector& u, const PrecisionRequest& req);

/// Ranges of g1..g6 over a box (index 0 is g1).
std::array<RationalInterval, 6> cmc_g_ranges(const Box& box);

/// The published bound constants together with the boxes they refer to.
struct CmcConstants {
    Box u1;                    // the box the iterates must stay in
    Rational epsilon;          // U2 = U1 widened by epsilon
    RationalVector f_bounds;   // |f_i| bounds: 1, 1.033, 4.98
    BoundMatrix jacobian_bounds{3};
    Rational k0;               // |Df| bound, 6.8246
    Rational m0;               // max |f_i|, 4.98
    RationalVector m;          // |F_1i| bounds: 4.98, 5.41, 15.26

    Box u2() const { return u1.inflate(epsilon); }

    static CmcConstants published();
};

struct LemmaReport {
    std::string name;
    std::vector<Inequality> checks;
    std::vector<std::pair<std::string, RationalInterval>> ranges;
    std::vector<std::string> notes;

    bool passed() const;
    std::vector<std::string> failures() const;
    /// Throws VerificationFailed naming every failed check.
    void require() const;
};

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ranges of g1..g6 over U2 against the stated endpoints d_i, e_i. The
/// endpoints follow the box: e.g. e1 = cos(lower u3 edge), d5 = cot(2 * upper
/// u2 edge).
LemmaReport verify_lemma1(const Box& u2);
/// |f1| <= 1, |f2| < 1.033, |f3| < 4.98 through the g7, g8, g9 products.
LemmaReport verify_lemma2(const Box& u2);
/// Entrywise Jacobian bounds and the Frobenius bound K0.
LemmaReport verify_lemma3(const Box& u2, const CmcConstants& c);
/// F_1 = Df f bounds M1..M3 and the uniform bound M0.
LemmaReport verify_lemma4(const Box& u2, const CmcConstants& c);

std::vector<LemmaReport> verify_all_lemmas(const CmcConstants& c);

/// Constants for an arbitrary box: interval ranges over pieces^3 sub-boxes
/// of U2, each rounded up to a multiple of 10^-4; K0 from the Frobenius norm.
CmcConstants derive_constants(const Box& u1, const Rational& epsilon, int pieces = 8);
/// Checks any constant set against those ranges (no reference to the
/// published numbers).
LemmaReport verify_constants(const CmcConstants& c, int pieces = 8);

}  // namespace rtm
