// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kglf {

// Coefficients of the linear metric combination. Kept on the probability
// simplex: every entry in [0, 1] and the entries sum to one. The genetic
// operators treat the sequence as circular (last element followed by the
// first).
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> raw);  // normalizes
  WeightVector(std::initializer_list<double> raw) : WeightVector(std::vector<double>(raw)) {}

  static WeightVector uniform(std::size_t n);
  static WeightVector one_hot(std::size_t n, std::size_t hot);
  // Scales to unit sum. Negative or non-finite entries are rejected; an
  // all-zero input falls back to the uniform vector.
  static std::vector<double> normalize(std::vector<double> raw);

  std::size_t size() const { return w_.size(); }
  bool empty() const { return w_.empty(); }
  double operator[](std::size_t i) const { return w_[i]; }
  // Circular access: at(size()) is the first element again.
  double at_circular(std::size_t i) const { return w_[i % w_.size()]; }
  std::span<const double> values() const { return w_; }
  bool on_simplex(double tol = 1e-9) const;

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> w_;
};

}  // namespace kglf
