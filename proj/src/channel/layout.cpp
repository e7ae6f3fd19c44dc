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

#include "rsma/channel/layout.hpp"

#include <stdexcept>

namespace rsma::channel {

std::string to_string(StreamMode mode) {
  return mode == StreamMode::OneLayer ? "one_layer" : "hierarchical";
}

StreamMode stream_mode_from_string(const std::string& s) {
  if (s == "one_layer" || s == "1lrs") return StreamMode::OneLayer;
  if (s == "hierarchical" || s == "hrs") return StreamMode::Hierarchical;
  throw std::invalid_argument("unknown stream mode '" + s + "'");
}

StreamLayout StreamLayout::equal_groups(std::size_t n_tx, std::size_t n_users, std::size_t n_groups,
                                        StreamMode mode) {
  StreamLayout l;
  l.n_tx = n_tx;
  l.n_users = n_users;
  l.n_groups = n_groups;
  l.mode = mode;
  l.group_of.resize(n_users);
  if (n_groups > 0)
    for (std::size_t k = 0; k < n_users; ++k) l.group_of[k] = k * n_groups / n_users;
  l.validate();
  return l;
}

std::vector<std::size_t> StreamLayout::active_columns() const {
  std::vector<std::size_t> cols;
  cols.reserve(n_streams());
  cols.push_back(common_col());
  if (hierarchical())
    for (std::size_t g = 0; g < n_groups; ++g) cols.push_back(group_col(g));
  for (std::size_t k = 0; k < n_users; ++k) cols.push_back(private_col(k));
  return cols;
}

std::vector<std::size_t> StreamLayout::members(std::size_t g) const {
  std::vector<std::size_t> m;
  for (std::size_t k = 0; k < n_users; ++k)
    if (group_of[k] == g) m.push_back(k);
  return m;
}

void StreamLayout::validate() const {
  if (n_tx == 0) throw std::invalid_argument("layout: n_tx must be >= 1");
  if (n_users == 0) throw std::invalid_argument("layout: n_users must be >= 1");
  if (n_groups == 0) throw std::invalid_argument("layout: n_groups must be >= 1");
  if (group_of.size() != n_users)
    throw std::invalid_argument("layout: group_of must have one entry per user");
  std::vector<std::size_t> count(n_groups, 0);
  for (std::size_t g : group_of) {
    if (g >= n_groups) throw std::invalid_argument("layout: user mapped to a group outside 1..G");
    ++count[g];
  }
  if (hierarchical())
    for (std::size_t g = 0; g < n_groups; ++g)
      if (count[g] == 0)
        throw std::invalid_argument("layout: group " + std::to_string(g + 1) + " has no members");
}

}  // namespace rsma::channel
