#include "lab/atomic_measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace lab {

double AtomicMeasure::total_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.mass;
  return m;
}

double AtomicMeasure::min_position() const {
  double p = atoms.empty() ? 0.0 : atoms.front().position;
  for (const Atom& a : atoms) p = std::min(p, a.position);
  return p;
}

double AtomicMeasure::max_position() const {
  double p = atoms.empty() ? 0.0 : atoms.front().position;
  for (const Atom& a : atoms) p = std::max(p, a.position);
  return p;
}

AtomicMeasure make_atomic(std::vector<double> positions,
                          std::vector<double> masses) {
  if (positions.size() != masses.size()) {
    throw std::invalid_argument("make_atomic: size mismatch");
  }
  AtomicMeasure mu;
  mu.atoms.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!(masses[i] >= 0.0)) {
      throw std::invalid_argument("make_atomic: negative mass");
    }
    mu.atoms.push_back({positions[i], masses[i]});
  }
  return mu;
}

AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b) {
  AtomicMeasure out;
  out.atoms.reserve(a.atoms.size() * b.atoms.size());
  for (const auto& x : a.atoms) {
    for (const auto& y : b.atoms) {
      out.atoms.push_back({x.position + y.position, x.mass * y.mass});
    }
  }
  return out;
}

}  // namespace lab
