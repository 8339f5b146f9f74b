#include "mgen/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mgen {

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL") << " (tolerance " << tolerance << ")\n";
  for (const auto& e : entries) {
    os << "  " << (e.rel_error <= tolerance ? "ok   " : "FAIL ") << e.param
       << "[" << e.index << "] analytic=" << e.analytic
       << " numeric=" << e.numeric << " rel=" << e.rel_error << " ("
       << e.checked << " coords)\n";
  }
  return os.str();
}

GradCheckReport grad_check(const std::function<double()>& loss,
                           ParamStore& store, double epsilon, double tolerance,
                           std::size_t max_coords, Rng& rng) {
  GradCheckReport report;
  report.tolerance = tolerance;
  report.passed = true;

  for (auto& [name, p] : store) {
    const std::size_t n = p.value.size();
    if (n == 0) continue;

    std::vector<std::size_t> coords;
    if (max_coords == 0 || n <= max_coords) {
      coords.resize(n);
      for (std::size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      std::set<std::size_t> picked;
      while (picked.size() < max_coords) picked.insert(rng.below(n));
      coords.assign(picked.begin(), picked.end());
    }

    GradCheckEntry worst;
    worst.param = name;
    worst.checked = coords.size();
    worst.rel_error = -1.0;
    for (std::size_t i : coords) {
      double* x = p.value.data() + i;
      const double saved = *x;
      *x = saved + epsilon;
      const double f_plus = loss();
      *x = saved - epsilon;
      const double f_minus = loss();
      *x = saved;

      const double numeric = (f_plus - f_minus) / (2.0 * epsilon);
      const double analytic = p.grad[i];
      const double denom = std::abs(analytic) + std::abs(numeric);
      const double rel = denom < 1e-10 ? 0.0 : std::abs(analytic - numeric) / denom;
      if (rel > worst.rel_error) {
        worst.rel_error = rel;
        worst.index = i;
        worst.analytic = analytic;
        worst.numeric = numeric;
      }
    }
    if (worst.rel_error < 0.0) worst.rel_error = 0.0;
    if (worst.rel_error > tolerance) report.passed = false;
    report.entries.push_back(worst);
  }
  return report;
}

}  // namespace mgen
