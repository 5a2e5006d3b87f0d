#pragma once

#include <vector>

namespace lab {

/// Finitely many weighted point masses on the line.
struct AtomicMeasure {
  struct Atom {
    double position = 0.0;
    double mass = 0.0;
  };
  std::vector<Atom> atoms;

  double total_mass() const;
  double min_position() const;
  double max_position() const;
};

AtomicMeasure make_atomic(std::vector<double> positions,
                          std::vector<double> masses);

/// Convolution of two atomic measures (all pairwise sums of positions).
AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b);

}  // namespace lab
