#include "lab/dyadic_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lab {

namespace {

void check_depth(int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw std::invalid_argument("DyadicMeasure: depth out of range");
  }
}

void check_nonnegative(const std::vector<double>& w) {
  for (double v : w) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("DyadicMeasure: negative weight");
    }
  }
}

}  // namespace

DyadicMeasure DyadicMeasure::dense(int depth, std::vector<double> weights) {
  check_depth(depth);
  if (weights.size() != (std::size_t{1} << depth)) {
    throw std::invalid_argument("DyadicMeasure::dense: wrong weight count");
  }
  check_nonnegative(weights);
  DyadicMeasure mu;
  mu.depth_ = depth;
  mu.sparse_ = false;
  mu.weights_ = std::move(weights);
  return mu;
}

DyadicMeasure DyadicMeasure::sparse(int depth,
                                    std::vector<std::uint64_t> indices,
                                    std::vector<double> weights) {
  check_depth(depth);
  if (indices.size() != weights.size()) {
    throw std::invalid_argument("DyadicMeasure::sparse: size mismatch");
  }
  check_nonnegative(weights);
  std::vector<std::size_t> order(indices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return indices[a] < indices[b];
  });
  DyadicMeasure mu;
  mu.depth_ = depth;
  mu.sparse_ = true;
  mu.indices_.reserve(indices.size());
  mu.weights_.reserve(indices.size());
  const std::uint64_t limit = std::uint64_t{1} << depth;
  for (std::size_t i : order) {
    if (indices[i] >= limit) {
      throw std::invalid_argument("DyadicMeasure::sparse: index overflow");
    }
    if (!mu.indices_.empty() && mu.indices_.back() == indices[i]) {
      mu.weights_.back() += weights[i];
    } else {
      mu.indices_.push_back(indices[i]);
      mu.weights_.push_back(weights[i]);
    }
  }
  return mu;
}

DyadicMeasure DyadicMeasure::lebesgue(int depth) {
  check_depth(depth);
  return dense(depth, std::vector<double>(std::size_t{1} << depth,
                                          std::ldexp(1.0, -depth)));
}

DyadicMeasure DyadicMeasure::point_mass(int depth, std::uint64_t cell,
                                        double mass) {
  return sparse(depth, {cell}, {mass});
}

double DyadicMeasure::cell_length() const { return std::ldexp(1.0, -depth_); }

std::size_t DyadicMeasure::nonzero_count() const {
  std::size_t n = 0;
  for (double w : weights_) n += (w != 0.0);
  return n;
}

double DyadicMeasure::total_mass() const {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

double DyadicMeasure::weight_at(std::uint64_t cell) const {
  if (cell >= cell_count()) {
    throw std::out_of_range("weight_at: cell out of range");
  }
  if (!sparse_) return weights_[cell];
  auto it = std::lower_bound(indices_.begin(), indices_.end(), cell);
  if (it == indices_.end() || *it != cell) return 0.0;
  return weights_[static_cast<std::size_t>(it - indices_.begin())];
}

void DyadicMeasure::for_each_nonzero(
    const std::function<void(std::uint64_t, double)>& fn) const {
  if (sparse_) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (weights_[i] != 0.0) fn(indices_[i], weights_[i]);
    }
  } else {
    for (std::size_t p = 0; p < weights_.size(); ++p) {
      if (weights_[p] != 0.0) fn(static_cast<std::uint64_t>(p), weights_[p]);
    }
  }
}

double DyadicMeasure::mass_of(const CylinderSet& set) const {
  if (set.depth() > depth_) {
    throw std::invalid_argument("mass_of: set deeper than measure");
  }
  double m = 0.0;
  for_each_nonzero([&](std::uint64_t p, double w) {
    if (set.contains_cell(p, depth_)) m += w;
  });
  return m;
}

double DyadicMeasure::mass_where(
    const std::function<bool(std::uint64_t)>& pred) const {
  double m = 0.0;
  for_each_nonzero([&](std::uint64_t p, double w) {
    if (pred(p)) m += w;
  });
  return m;
}

DyadicMeasure DyadicMeasure::densified(std::size_t budget) const {
  if (!sparse_) return *this;
  if (cell_count() > budget) {
    throw std::runtime_error("densified: cell budget exceeded");
  }
  std::vector<double> w(cell_count(), 0.0);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    w[indices_[i]] = weights_[i];
  }
  return dense(depth_, std::move(w));
}

DyadicMeasure DyadicMeasure::sparsified() const {
  if (sparse_) return *this;
  std::vector<std::uint64_t> idx;
  std::vector<double> w;
  for_each_nonzero([&](std::uint64_t p, double v) {
    idx.push_back(p);
    w.push_back(v);
  });
  return sparse(depth_, std::move(idx), std::move(w));
}

DyadicMeasure refine(const DyadicMeasure& mu, int new_depth,
                     std::size_t budget) {
  if (new_depth < mu.depth()) {
    throw std::invalid_argument("refine: new_depth below current depth");
  }
  if (new_depth > kMaxDepth) {
    throw std::invalid_argument("refine: depth cap exceeded");
  }
  const int shift = new_depth - mu.depth();
  if (shift == 0) return mu;
  const std::uint64_t fan = std::uint64_t{1} << shift;
  const double scale = 1.0 / static_cast<double>(fan);
  if (mu.is_sparse()) {
    std::vector<std::uint64_t> idx;
    std::vector<double> w;
    idx.reserve(mu.sparse_indices().size() * fan);
    w.reserve(idx.capacity());
    if (idx.capacity() > budget) {
      throw std::runtime_error("refine: budget exceeded");
    }
    mu.for_each_nonzero([&](std::uint64_t p, double v) {
      for (std::uint64_t c = 0; c < fan; ++c) {
        idx.push_back((p << shift) | c);
        w.push_back(v * scale);
      }
    });
    return DyadicMeasure::sparse(new_depth, std::move(idx), std::move(w));
  }
  if ((std::uint64_t{1} << new_depth) > budget) {
    throw std::runtime_error("refine: budget exceeded");
  }
  std::vector<double> w(std::size_t{1} << new_depth);
  const auto& src = mu.dense_weights();
  for (std::size_t p = 0; p < src.size(); ++p) {
    const double v = src[p] * scale;
    for (std::uint64_t c = 0; c < fan; ++c) w[(p << shift) | c] = v;
  }
  return DyadicMeasure::dense(new_depth, std::move(w));
}

DyadicMeasure restrict_to(const DyadicMeasure& mu, const CylinderSet& set) {
  const DyadicMeasure* src = &mu;
  DyadicMeasure refined_mu = mu;
  if (set.depth() > mu.depth()) {
    // Refine the measure so cells nest inside the set's cells.
    refined_mu = refine(mu, set.depth());
    src = &refined_mu;
  }
  const int n = src->depth();
  return restrict_where(*src, [&](std::uint64_t p) {
    return set.contains_cell(p, n);
  });
}

DyadicMeasure restrict_where(const DyadicMeasure& mu,
                             const std::function<bool(std::uint64_t)>& pred) {
  if (mu.is_sparse()) {
    std::vector<std::uint64_t> idx;
    std::vector<double> w;
    mu.for_each_nonzero([&](std::uint64_t p, double v) {
      if (pred(p)) {
        idx.push_back(p);
        w.push_back(v);
      }
    });
    return DyadicMeasure::sparse(mu.depth(), std::move(idx), std::move(w));
  }
  std::vector<double> w(mu.dense_weights());
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (!pred(static_cast<std::uint64_t>(p))) w[p] = 0.0;
  }
  return DyadicMeasure::dense(mu.depth(), std::move(w));
}

DyadicMeasure dyadic_pushforward(const DyadicMeasure& mu, int l) {
  if (l < 0 || l > mu.depth()) {
    throw std::invalid_argument(
        "dyadic_pushforward: shift exceeds depth (information loss)");
  }
  if (l == 0) return mu;
  const int out_depth = mu.depth() - l;
  const std::uint64_t mask = (std::uint64_t{1} << out_depth) - 1;
  if (mu.is_sparse()) {
    std::vector<std::uint64_t> idx;
    std::vector<double> w;
    mu.for_each_nonzero([&](std::uint64_t p, double v) {
      idx.push_back(p & mask);
      w.push_back(v);
    });
    return DyadicMeasure::sparse(out_depth, std::move(idx), std::move(w));
  }
  std::vector<double> w(std::size_t{1} << out_depth, 0.0);
  mu.for_each_nonzero(
      [&](std::uint64_t p, double v) { w[p & mask] += v; });
  return DyadicMeasure::dense(out_depth, std::move(w));
}

DyadicMeasure normalize(const DyadicMeasure& mu) {
  const double m = mu.total_mass();
  if (!(m > 0.0)) {
    throw std::invalid_argument("normalize: zero total mass");
  }
  const double scale = 1.0 / m;
  if (mu.is_sparse()) {
    std::vector<std::uint64_t> idx = mu.sparse_indices();
    std::vector<double> w = mu.sparse_weights();
    for (double& v : w) v *= scale;
    return DyadicMeasure::sparse(mu.depth(), std::move(idx), std::move(w));
  }
  std::vector<double> w = mu.dense_weights();
  for (double& v : w) v *= scale;
  return DyadicMeasure::dense(mu.depth(), std::move(w));
}

void to_json(nlohmann::json& j, const DyadicMeasure& mu) {
  if (mu.is_sparse()) {
    j = nlohmann::json{{"depth", mu.depth()},
                       {"indices", mu.sparse_indices()},
                       {"weights", mu.sparse_weights()}};
  } else {
    j = nlohmann::json{{"depth", mu.depth()}, {"weights", mu.dense_weights()}};
  }
}

DyadicMeasure dyadic_measure_from_json(const nlohmann::json& j) {
  const int depth = j.at("depth").get<int>();
  auto weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("indices")) {
    return DyadicMeasure::sparse(
        depth, j.at("indices").get<std::vector<std::uint64_t>>(),
        std::move(weights));
  }
  return DyadicMeasure::dense(depth, std::move(weights));
}

}  // namespace lab
