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

#include "rsma/gradients/tape.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "rsma/rates/scalar_ops.hpp"

namespace rsma::grad {

Var Tape::variable(double value) {
  const auto id = static_cast<std::uint32_t>(values_.size());
  values_.push_back(value);
  edge_begin_.push_back(static_cast<std::uint32_t>(parents_.size()));
  return {this, id, value};
}

Var Tape::node(double value, std::span<const std::uint32_t> parents, std::span<const double> partials) {
  assert(parents.size() == partials.size());
  const auto id = static_cast<std::uint32_t>(values_.size());
  values_.push_back(value);
  parents_.insert(parents_.end(), parents.begin(), parents.end());
  partials_.insert(partials_.end(), partials.begin(), partials.end());
  edge_begin_.push_back(static_cast<std::uint32_t>(parents_.size()));
  return {this, id, value};
}

Var Tape::unary(double value, const Var& a, double da) {
  const auto id = static_cast<std::uint32_t>(values_.size());
  values_.push_back(value);
  parents_.push_back(a.id);
  partials_.push_back(da);
  edge_begin_.push_back(static_cast<std::uint32_t>(parents_.size()));
  return {this, id, value};
}

Var Tape::binary(double value, const Var& a, double da, const Var& b, double db) {
  const auto id = static_cast<std::uint32_t>(values_.size());
  values_.push_back(value);
  parents_.push_back(a.id);
  partials_.push_back(da);
  parents_.push_back(b.id);
  partials_.push_back(db);
  edge_begin_.push_back(static_cast<std::uint32_t>(parents_.size()));
  return {this, id, value};
}

Var Tape::commit_scratch(double value) {
  Var v = node(value, scratch_parents_, scratch_partials_);
  scratch_parents_.clear();
  scratch_partials_.clear();
  return v;
}

void Tape::clear() {
  values_.clear();
  edge_begin_.assign(1, 0);
  parents_.clear();
  partials_.clear();
  adjoints_.clear();
}

void Tape::seed(const Var& v, double s) {
  if (adjoints_.size() != values_.size()) adjoints_.assign(values_.size(), 0.0);
  adjoints_[v.id] += s;
}

void Tape::backward() {
  if (adjoints_.size() != values_.size()) adjoints_.assign(values_.size(), 0.0);
  for (std::size_t i = values_.size(); i-- > 0;) {
    const double a = adjoints_[i];
    if (a == 0.0) continue;
    const std::uint32_t end = edge_begin_[i + 1];
    for (std::uint32_t e = edge_begin_[i]; e < end; ++e) adjoints_[parents_[e]] += a * partials_[e];
  }
}

void Tape::backward(const Var& out) {
  adjoints_.assign(values_.size(), 0.0);
  seed(out, 1.0);
  backward();
}

namespace {
Tape* tape_of(const Var& a, const Var& b) {
  if (a.tape != b.tape) throw std::logic_error("Var operands recorded on different tapes");
  return a.tape;
}
}  // namespace

Var operator+(const Var& a, const Var& b) { return tape_of(a, b)->binary(a.val + b.val, a, 1.0, b, 1.0); }
Var operator-(const Var& a, const Var& b) { return tape_of(a, b)->binary(a.val - b.val, a, 1.0, b, -1.0); }
Var operator*(const Var& a, const Var& b) { return tape_of(a, b)->binary(a.val * b.val, a, b.val, b, a.val); }
Var operator/(const Var& a, const Var& b) {
  const double q = a.val / b.val;
  return tape_of(a, b)->binary(q, a, 1.0 / b.val, b, -q / b.val);
}
Var operator+(const Var& a, double b) { return a.tape->unary(a.val + b, a, 1.0); }
Var operator+(double a, const Var& b) { return b.tape->unary(a + b.val, b, 1.0); }
Var operator-(const Var& a, double b) { return a.tape->unary(a.val - b, a, 1.0); }
Var operator-(double a, const Var& b) { return b.tape->unary(a - b.val, b, -1.0); }
Var operator*(const Var& a, double b) { return a.tape->unary(a.val * b, a, b); }
Var operator*(double a, const Var& b) { return b.tape->unary(a * b.val, b, a); }
Var operator/(const Var& a, double b) { return a.tape->unary(a.val / b, a, 1.0 / b); }
Var operator/(double a, const Var& b) {
  const double q = a / b.val;
  return b.tape->unary(q, b, -q / b.val);
}
Var operator-(const Var& a) { return a.tape->unary(-a.val, a, -1.0); }

Var log(const Var& a) { return a.tape->unary(std::log(a.val), a, 1.0 / a.val); }
Var log1p(const Var& a) { return a.tape->unary(std::log1p(a.val), a, 1.0 / (1.0 + a.val)); }
Var exp(const Var& a) {
  const double e = std::exp(a.val);
  return a.tape->unary(e, a, e);
}
Var sqrt(const Var& a) {
  const double s = std::sqrt(a.val);
  return a.tape->unary(s, a, 0.5 / s);
}
Var square(const Var& a) { return a.tape->unary(a.val * a.val, a, 2.0 * a.val); }
Var relu(const Var& a) { return a.tape->unary(a.val > 0.0 ? a.val : 0.0, a, a.val > 0.0 ? 1.0 : 0.0); }

Var tanh(const Var& a) {
  const double t = std::tanh(a.val);
  return a.tape->unary(t, a, 1.0 - t * t);
}

Var sum_with(double c, std::span<const Var> x) {
  if (x.empty()) throw std::invalid_argument("sum_with: empty operand list");
  Tape* t = x[0].tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  double acc = c;
  for (const Var& v : x) {
    acc += v.val;
    par.push_back(v.id);
    pd.push_back(1.0);
  }
  return t->commit_scratch(acc);
}

Var dot_plus(const Var& b, std::span<const Var> w, std::span<const Var> x) {
  if (w.size() != x.size()) throw std::invalid_argument("dot_plus: length mismatch");
  Tape* t = b.tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  double acc = b.val;
  par.push_back(b.id);
  pd.push_back(1.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i].val * x[i].val;
    par.push_back(w[i].id);
    pd.push_back(x[i].val);
    par.push_back(x[i].id);
    pd.push_back(w[i].val);
  }
  return t->commit_scratch(acc);
}

Var linear_plus(const Var& b, std::span<const Var> w, std::span<const double> c) {
  if (w.size() != c.size()) throw std::invalid_argument("linear_plus: length mismatch");
  Tape* t = b.tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  double acc = b.val;
  par.push_back(b.id);
  pd.push_back(1.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i].val * c[i];
    par.push_back(w[i].id);
    pd.push_back(c[i]);
  }
  return t->commit_scratch(acc);
}

Var squared_norm(std::span<const Var> x) {
  if (x.empty()) throw std::invalid_argument("squared_norm: empty operand list");
  Tape* t = x[0].tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  double acc = 0.0;
  for (const Var& v : x) {
    acc += v.val * v.val;
    par.push_back(v.id);
    pd.push_back(2.0 * v.val);
  }
  return t->commit_scratch(acc);
}

Var min_lowest(std::span<const Var> x) {
  if (x.empty()) throw std::invalid_argument("min_lowest: empty operand list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i].val < x[best].val) best = i;
  return x[best].tape->unary(x[best].val, x[best], 1.0);
}

Var smooth_min(std::span<const Var> x, double temperature) {
  if (x.empty()) throw std::invalid_argument("smooth_min: empty operand list");
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i].val;
  std::vector<double> w(x.size());
  const double value = rates::ops::smooth_min_with_weights(v, temperature, w);
  Tape* t = x[0].tape;
  auto& par = t->scratch_parents();
  auto& pd = t->scratch_partials();
  for (std::size_t i = 0; i < x.size(); ++i) {
    par.push_back(x[i].id);
    pd.push_back(w[i]);
  }
  return t->commit_scratch(value);
}

}  // namespace rsma::grad
