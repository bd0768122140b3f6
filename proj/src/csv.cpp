#include "csv.hpp"

#include <cstdio>

namespace kinsbp {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_solution_dump(const std::vector<SlabSolution>& solutions,
                         std::ostream& os) {
  os << "field,k,time,x,value\n";
  for (const auto& sol : solutions) {
    for (int it = 0; it < sol.nt(); ++it) {
      const std::string t = format_float(sol.times(it));
      for (int s = 0; s < sol.space(); ++s) {
        os << "rho,0," << t << ',' << format_float(sol.x(s)) << ','
           << format_float(sol.rho(it, s)) << '\n';
      }
      for (int k = 0; k < sol.nv(); ++k) {
        for (int s = 0; s < sol.space(); ++s) {
          os << "g," << (k + 1) << ',' << t << ',' << format_float(sol.x(s))
             << ',' << format_float(sol.g[k](it, s)) << '\n';
        }
      }
    }
  }
}

} // namespace kinsbp
