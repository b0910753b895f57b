#pragma once

// Randomised property checks shared by the property suite and the
// acceptance runner. Each returns the number of samples and violations.

#include <string>

#include "rtm/rational.hpp"

namespace props {

struct Result {
    std::string name;
    long samples = 0;
    long violations = 0;
    std::string first_violation;

    bool ok() const { return samples > 0 && violations == 0; }
};

/// sin, cos, cot, csc, exp enclosures against the MPFR oracle.
Result enclosure_containment(long n, unsigned seed);
/// z = R floor(y/R): z on the grid, 0 <= y - z < R, rounding z again is a no-op.
Result grid_rounding(long n, unsigned seed);
/// Rounded Euler for y' = y - y^2/3, y(0) = 1/2 against the exact solution
/// 3 / (1 + 5 e^{-t}) on [0, T]: |z_j - y(jh)| <= R~ at every step, with the
/// bound constants taken from interval ranges over the box.
Result logistic_error_bound(const rtm::Rational& h, const rtm::Rational& resolution, const rtm::Rational& horizon);
/// a o b in A o B for random intervals and points, o in + - * /.
Result interval_containment(long n, unsigned seed);

}  // namespace props
