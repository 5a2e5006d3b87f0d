#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "lab/cylinder_set.hpp"

namespace lab {

/// Nonnegative weights on the 2^n dyadic intervals of depth n. weights[p] is
/// the total mass of [p*2^-n, (p+1)*2^-n), spread uniformly over the interval.
/// Storage is either dense (one weight per cell) or sparse (sorted
/// index/weight pairs); all operations return new values.
class DyadicMeasure {
 public:
  static DyadicMeasure dense(int depth, std::vector<double> weights);
  static DyadicMeasure sparse(int depth, std::vector<std::uint64_t> indices,
                              std::vector<double> weights);
  static DyadicMeasure lebesgue(int depth);
  static DyadicMeasure point_mass(int depth, std::uint64_t cell, double mass);

  int depth() const { return depth_; }
  bool is_sparse() const { return sparse_; }
  std::uint64_t cell_count() const { return std::uint64_t{1} << depth_; }
  double cell_length() const;
  std::size_t nonzero_count() const;
  double total_mass() const;
  double weight_at(std::uint64_t cell) const;

  /// Dense weight array; only valid when !is_sparse().
  const std::vector<double>& dense_weights() const { return weights_; }
  const std::vector<std::uint64_t>& sparse_indices() const { return indices_; }
  const std::vector<double>& sparse_weights() const { return weights_; }

  /// Visit nonzero cells in ascending index order.
  void for_each_nonzero(
      const std::function<void(std::uint64_t, double)>& fn) const;

  double mass_of(const CylinderSet& set) const;
  double mass_where(const std::function<bool(std::uint64_t)>& pred) const;

  /// Convert representation. Densifying is budget-checked.
  DyadicMeasure densified(std::size_t budget = (std::size_t{1} << 27)) const;
  DyadicMeasure sparsified() const;

 private:
  DyadicMeasure() = default;
  int depth_ = 0;
  bool sparse_ = false;
  std::vector<std::uint64_t> indices_;  // sparse only
  std::vector<double> weights_;
};

DyadicMeasure refine(const DyadicMeasure& mu, int new_depth,
                     std::size_t budget = (std::size_t{1} << 27));
DyadicMeasure restrict_to(const DyadicMeasure& mu, const CylinderSet& set);
DyadicMeasure restrict_where(const DyadicMeasure& mu,
                             const std::function<bool(std::uint64_t)>& pred);
/// Image measure under x -> 2^l x mod 1; result depth is depth - l.
DyadicMeasure dyadic_pushforward(const DyadicMeasure& mu, int l);
DyadicMeasure normalize(const DyadicMeasure& mu);

void to_json(nlohmann::json& j, const DyadicMeasure& mu);
DyadicMeasure dyadic_measure_from_json(const nlohmann::json& j);

}  // namespace lab
