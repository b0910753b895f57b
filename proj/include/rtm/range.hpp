#pragma once

// Rigorous ranges of one-variable elementary functions over an interval.

#include <string_view>

#include "rtm/enclosure.hpp"

namespace rtm {

enum class ElementaryFn { Sin, Cos, Cot, Csc, CscSquared, Exp };

std::string_view to_string(ElementaryFn fn);

/// Interval containing { fn(x) : x in domain }.
///
/// sin and cos take the hull of the endpoint enclosures and of every
/// interior extremum that a pi enclosure cannot rule out. csc is 1/sin over
/// the sin range, so interior extrema are handled too. cot must be monotone
/// on the domain. Throws PoleProximity when a pole of cot/csc may lie in the
/// domain.
RationalInterval monotone_range(ElementaryFn fn, const RationalInterval& domain, const PrecisionRequest& req);

}  // namespace rtm
