#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace lab {

inline constexpr int kMaxDepth = 30;

/// A finite union of dyadic intervals of a common depth, stored as the
/// sorted list of interval indices. Interval p covers [p*2^-n, (p+1)*2^-n).
class CylinderSet {
 public:
  CylinderSet(int depth, std::vector<std::uint64_t> indices);

  static CylinderSet full(int depth);
  static CylinderSet empty(int depth);

  int depth() const { return depth_; }
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::uint64_t size() const { return indices_.size(); }
  double cell_length() const;
  double lebesgue_mass() const;

  /// Membership of a cell given at a depth >= this set's depth.
  bool contains_cell(std::uint64_t cell, int cell_depth) const;

  CylinderSet complement() const;
  /// Re-express at a deeper depth; each interval splits into 2^(d-depth) cells.
  CylinderSet refined(int new_depth, std::size_t budget = (1u << 24)) const;

  bool operator==(const CylinderSet& other) const = default;

 private:
  int depth_;
  std::vector<std::uint64_t> indices_;
};

CylinderSet set_union(const CylinderSet& a, const CylinderSet& b);
CylinderSet set_intersection(const CylinderSet& a, const CylinderSet& b);

void to_json(nlohmann::json& j, const CylinderSet& s);
CylinderSet cylinder_set_from_json(const nlohmann::json& j);

}  // namespace lab
