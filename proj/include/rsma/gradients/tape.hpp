// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The rsma-mlbpo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RSMA_GRADIENTS_TAPE_HPP
#define RSMA_GRADIENTS_TAPE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rsma::grad {

class Tape;

// Handle to a recorded scalar. Carries its primal value so arithmetic never
// has to look back into the tape.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t id = 0;
  double val = 0.0;

  double value() const { return val; }
};

// Reverse-mode accumulation over real scalars. Each node stores its value and
// the local partial derivatives towards its parents; backward() walks the
// nodes in reverse recording order. Single-threaded; clear() keeps capacity so
// a tape can be reused across evaluations.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value);
  Var node(double value, std::span<const std::uint32_t> parents, std::span<const double> partials);
  Var unary(double value, const Var& a, double da);
  Var binary(double value, const Var& a, double da, const Var& b, double db);

  // Scratch buffers for building n-ary nodes without allocation.
  std::vector<std::uint32_t>& scratch_parents() { return scratch_parents_; }
  std::vector<double>& scratch_partials() { return scratch_partials_; }
  Var commit_scratch(double value);

  std::size_t size() const { return values_.size(); }
  std::size_t edge_count() const { return parents_.size(); }
  void clear();

  // Adds `seed` to the adjoint of `v` (call before backward()).
  void seed(const Var& v, double seed);
  // Propagates seeded adjoints to every node.
  void backward();
  // Convenience: seed `out` with 1 and propagate.
  void backward(const Var& out);

  double adjoint(const Var& v) const { return adjoints_[v.id]; }
  double value(std::uint32_t id) const { return values_[id]; }

 private:
  std::vector<double> values_;
  std::vector<std::uint32_t> edge_begin_{0};
  std::vector<std::uint32_t> parents_;
  std::vector<double> partials_;
  std::vector<double> adjoints_;
  std::vector<std::uint32_t> scratch_parents_;
  std::vector<double> scratch_partials_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator+(const Var& a, double b);
Var operator+(double a, const Var& b);
Var operator-(const Var& a, double b);
Var operator-(double a, const Var& b);
Var operator*(const Var& a, double b);
Var operator*(double a, const Var& b);
Var operator/(const Var& a, double b);
Var operator/(double a, const Var& b);
Var operator-(const Var& a);

Var log(const Var& a);
Var log1p(const Var& a);
Var exp(const Var& a);
Var sqrt(const Var& a);
Var square(const Var& a);
Var relu(const Var& a);
Var tanh(const Var& a);

// c + sum_i x_i, summed left to right.
Var sum_with(double c, std::span<const Var> x);
// b + sum_i w_i x_i with both operands recorded.
Var dot_plus(const Var& b, std::span<const Var> w, std::span<const Var> x);
// b + sum_i w_i c_i with constant coefficients c.
Var linear_plus(const Var& b, std::span<const Var> w, std::span<const double> c);
// sum_i x_i^2
Var squared_norm(std::span<const Var> x);
// Lowest-index minimizer receives the full subgradient.
Var min_lowest(std::span<const Var> x);
// -t log sum exp(-x_i / t)
Var smooth_min(std::span<const Var> x, double temperature);

}  // namespace rsma::grad

#endif
