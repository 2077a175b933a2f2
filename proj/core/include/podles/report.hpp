#pragma once

#include "podles/axioms.hpp"

#include <string>

namespace podles {

/// Pretty-printed JSON document with a frozen key order; identical reports
/// serialize byte-identically. `stamp` appends a wall-clock field and is off
/// by default so repeated runs stay comparable.
std::string report_to_json(const VerificationReport& report, bool stamp = false);

/// Flat CSV with frozen columns:
/// suite,q,l_max,item,value,threshold,comparator,pass,note
std::string report_to_csv(const VerificationReport& report);

}  // namespace podles
