// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kglf/error.hpp"

namespace kglf {

WeightVector::WeightVector(std::vector<double> raw) : w_(normalize(std::move(raw))) {}

WeightVector WeightVector::uniform(std::size_t n) {
  return WeightVector(std::vector<double>(n, 1.0));
}

WeightVector WeightVector::one_hot(std::size_t n, std::size_t hot) {
  if (hot >= n) throw Error(ErrorCode::invalid_argument, "one-hot index out of range");
  std::vector<double> raw(n, 0.0);
  raw[hot] = 1.0;
  return WeightVector(std::move(raw));
}

std::vector<double> WeightVector::normalize(std::vector<double> raw) {
  double sum = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorCode::invalid_argument, "weights must be finite and non-negative");
    }
    sum += x;
  }
  if (raw.empty()) return raw;
  if (sum <= 0.0) {
    std::fill(raw.begin(), raw.end(), 1.0 / static_cast<double>(raw.size()));
    return raw;
  }
  for (double& x : raw) x /= sum;
  return raw;
}

bool WeightVector::on_simplex(double tol) const {
  if (w_.empty()) return false;
  double sum = 0.0;
  for (double x : w_) {
    if (!(x >= 0.0 && x <= 1.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace kglf
