#include "lab/cantor_oracle.hpp"

#include <cmath>
#include <numbers>

namespace lab {

std::complex<double> cantor_transform(double xi, int tail_levels) {
  const double axi = std::abs(xi);
  int levels = tail_levels;
  if (axi > 1.0) {
    levels += static_cast<int>(std::ceil(std::log(axi) / std::log(3.0)));
  }
  double prod = 1.0;
  double scale = 1.0 / 3.0;
  for (int i = 1; i <= levels; ++i) {
    prod *= std::cos(2.0 * std::numbers::pi * xi * scale);
    scale /= 3.0;
  }
  return std::polar(std::abs(prod),
                    -std::numbers::pi * xi + (prod < 0 ? std::numbers::pi : 0));
}

double cantor_transform_modulus(double xi, int tail_levels) {
  return std::abs(cantor_transform(xi, tail_levels));
}

std::vector<double> cantor_moduli(std::uint64_t j_max, int tail_levels) {
  std::vector<double> out(j_max);
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    out[j - 1] = cantor_transform_modulus(static_cast<double>(j), tail_levels);
  }
  return out;
}

}  // namespace lab
