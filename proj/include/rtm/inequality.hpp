#pragma once

#include <string>
#include <string_view>

#include "rtm/rational.hpp"

namespace rtm {

enum class Relation { Less, LessEqual, Greater, GreaterEqual, Equal };

std::string_view to_string(Relation r);

/// A checked statement "lhs relation rhs" between exact rationals.
struct Inequality {
    std::string label;
    Rational lhs;
    Relation relation = Relation::Less;
    Rational rhs;

    /// rhs - lhs for < and <=, lhs - rhs for > and >=, -|lhs - rhs| for ==.
    Rational slack() const;
    bool holds() const;
};

inline Inequality check_less(std::string label, Rational lhs, Rational rhs)
{
    return {std::move(label), std::move(lhs), Relation::Less, std::move(rhs)};
}
inline Inequality check_less_equal(std::string label, Rational lhs, Rational rhs)
{
    return {std::move(label), std::move(lhs), Relation::LessEqual, std::move(rhs)};
}
inline Inequality check_greater(std::string label, Rational lhs, Rational rhs)
{
    return {std::move(label), std::move(lhs), Relation::Greater, std::move(rhs)};
}
inline Inequality check_greater_equal(std::string label, Rational lhs, Rational rhs)
{
    return {std::move(label), std::move(lhs), Relation::GreaterEqual, std::move(rhs)};
}
inline Inequality check_equal(std::string label, Rational lhs, Rational rhs)
{
    return {std::move(label), std::move(lhs), Relation::Equal, std::move(rhs)};
}

}  // namespace rtm
