#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eeopt/jointopt.hpp"
#include "eeopt/numericopt.hpp"

namespace eeopt::cli {

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Results go to `out` only on success; failures write a single
/// JSON error object to `err`. Returns 0, 1 (runtime failure) or 2 (usage).
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// 12 significant digits, scientific notation.
std::string format_csv_double(double v);

/// CSV with header p_w,b_hz,m,ee_bit_per_j and LF line endings.
std::string surface_csv(const std::vector<numericopt::SurfaceRow>& rows);

/// CSV with header iteration,p_w,b_hz,m,ee_bit_per_j.
std::string trace_csv(const std::vector<jointopt::TraceEntry>& trace);

}  // namespace eeopt::cli
