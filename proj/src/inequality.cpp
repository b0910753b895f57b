#include "rtm/inequality.hpp"

namespace rtm {

std::string_view to_string(Relation r)
{
    switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "==";
    }
    return "?";
}

Rational Inequality::slack() const
{
    switch (relation) {
    case Relation::Less:
    case Relation::LessEqual:
        return rhs - lhs;
    case Relation::Greater:
    case Relation::GreaterEqual:
        return lhs - rhs;
    case Relation::Equal:
        return -abs(lhs - rhs);
    }
    return Rational(0);
}

bool Inequality::holds() const
{
    const int s = slack().sign();
    switch (relation) {
    case Relation::Less:
    case Relation::Greater:
        return s > 0;
    case Relation::LessEqual:
    case Relation::GreaterEqual:
    case Relation::Equal:
        return s >= 0;
    }
    return false;
}

}  // namespace rtm
