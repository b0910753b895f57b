#include "rtm/grid.hpp"

#include <stdexcept>

namespace rtm {

GridSpec::GridSpec(Rational resolution) : resolution_(std::move(resolution))
{
    if (resolution_.sign() <= 0)
        throw std::invalid_argument("grid resolution must be positive, got " + resolution_.str());
}

BigInt grid_index(const Rational& y, const GridSpec& grid)
{
    return floor(y / grid.resolution());
}

Rational round_to_grid(const Rational& y, const GridSpec& grid)
{
    return Rational(grid_index(y, grid)) * grid.resolution();
}

RationalVector round_vector_to_grid(const RationalVector& y, const GridSpec& grid)
{
    RationalVector out;
    out.reserve(y.size());
    for (const auto& c : y)
        out.push_back(round_to_grid(c, grid));
    return out;
}

bool on_grid(const Rational& y, const GridSpec& grid)
{
    return (y / grid.resolution()).is_integer();
}

}  // namespace rtm
