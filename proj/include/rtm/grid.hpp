#pragma once

// Grid rounding z = R * floor(y / R), the operator that keeps Round Taylor
// iterates on a fixed rational lattice.

#include "rtm/rational.hpp"

namespace rtm {

class GridSpec {
public:
    /// Throws std::invalid_argument unless resolution > 0.
    explicit GridSpec(Rational resolution);

    /// Resolution 10^-digits (digits may be negative).
    static GridSpec decimal(int digits) { return GridSpec(Rational::pow10(-digits)); }

    const Rational& resolution() const { return resolution_; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    Rational resolution_;
};

/// floor(y / R) as an integer index on the grid.
BigInt grid_index(const Rational& y, const GridSpec& grid);

Rational round_to_grid(const Rational& y, const GridSpec& grid);
RationalVector round_vector_to_grid(const RationalVector& y, const GridSpec& grid);

bool on_grid(const Rational& y, const GridSpec& grid);

}  // namespace rtm
