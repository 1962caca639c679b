#pragma once

#include <ostream>

namespace vsp {

/// Built-in verification sweep: Gronwall dominance on the stock inequality
/// cases, scheme agreement / envelope dominance / iteration budget on the
/// stock scenarios, and the hypomonotonicity diagnostics. Prints one line per
/// check; returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace vsp
