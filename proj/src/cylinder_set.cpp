#include "lab/cylinder_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lab {

CylinderSet::CylinderSet(int depth, std::vector<std::uint64_t> indices)
    : depth_(depth), indices_(std::move(indices)) {
  if (depth < 0 || depth > kMaxDepth) {
    throw std::invalid_argument("CylinderSet: depth out of range");
  }
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()),
                 indices_.end());
  const std::uint64_t limit = std::uint64_t{1} << depth_;
  if (!indices_.empty() && indices_.back() >= limit) {
    throw std::invalid_argument("CylinderSet: index beyond 2^depth");
  }
}

CylinderSet CylinderSet::full(int depth) {
  std::vector<std::uint64_t> idx(std::size_t{1} << depth);
  std::iota(idx.begin(), idx.end(), 0);
  return CylinderSet(depth, std::move(idx));
}

CylinderSet CylinderSet::empty(int depth) { return CylinderSet(depth, {}); }

double CylinderSet::cell_length() const { return std::ldexp(1.0, -depth_); }

double CylinderSet::lebesgue_mass() const {
  return static_cast<double>(indices_.size()) * cell_length();
}

bool CylinderSet::contains_cell(std::uint64_t cell, int cell_depth) const {
  if (cell_depth < depth_) {
    throw std::invalid_argument("contains_cell: cell coarser than set");
  }
  const std::uint64_t parent = cell >> (cell_depth - depth_);
  return std::binary_search(indices_.begin(), indices_.end(), parent);
}

CylinderSet CylinderSet::complement() const {
  const std::uint64_t limit = std::uint64_t{1} << depth_;
  std::vector<std::uint64_t> out;
  out.reserve(limit - indices_.size());
  std::size_t i = 0;
  for (std::uint64_t p = 0; p < limit; ++p) {
    if (i < indices_.size() && indices_[i] == p) {
      ++i;
    } else {
      out.push_back(p);
    }
  }
  return CylinderSet(depth_, std::move(out));
}

CylinderSet CylinderSet::refined(int new_depth, std::size_t budget) const {
  if (new_depth < depth_) {
    throw std::invalid_argument("refined: new_depth below current depth");
  }
  const int shift = new_depth - depth_;
  const std::uint64_t fan = std::uint64_t{1} << shift;
  if (indices_.size() * fan > budget) {
    throw std::runtime_error("refined: index budget exceeded");
  }
  std::vector<std::uint64_t> out;
  out.reserve(indices_.size() * fan);
  for (std::uint64_t p : indices_) {
    for (std::uint64_t c = 0; c < fan; ++c) out.push_back((p << shift) | c);
  }
  return CylinderSet(new_depth, std::move(out));
}

CylinderSet set_union(const CylinderSet& a, const CylinderSet& b) {
  if (a.depth() != b.depth()) {
    throw std::invalid_argument("set_union: depth mismatch");
  }
  std::vector<std::uint64_t> out;
  std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(),
                 b.indices().end(), std::back_inserter(out));
  return CylinderSet(a.depth(), std::move(out));
}

CylinderSet set_intersection(const CylinderSet& a, const CylinderSet& b) {
  if (a.depth() != b.depth()) {
    throw std::invalid_argument("set_intersection: depth mismatch");
  }
  std::vector<std::uint64_t> out;
  std::set_intersection(a.indices().begin(), a.indices().end(),
                        b.indices().begin(), b.indices().end(),
                        std::back_inserter(out));
  return CylinderSet(a.depth(), std::move(out));
}

void to_json(nlohmann::json& j, const CylinderSet& s) {
  j = nlohmann::json{{"depth", s.depth()}, {"indices", s.indices()}};
}

CylinderSet cylinder_set_from_json(const nlohmann::json& j) {
  return CylinderSet(j.at("depth").get<int>(),
                     j.at("indices").get<std::vector<std::uint64_t>>());
}

}  // namespace lab
