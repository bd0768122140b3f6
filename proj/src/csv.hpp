#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slab.hpp"

namespace kinsbp {

/// Lossless float formatting for CSV output (17 significant digits).
std::string format_float(double v);

/// Solution dump with columns (field, k, time, x, value); k = 0 for rho and
/// 1..nv for the micro fields.
void write_solution_dump(const std::vector<SlabSolution>& solutions,
                         std::ostream& os);

} // namespace kinsbp
