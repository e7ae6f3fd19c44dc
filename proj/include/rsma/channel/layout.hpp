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

#ifndef RSMA_CHANNEL_LAYOUT_HPP
#define RSMA_CHANNEL_LAYOUT_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace rsma::channel {

enum class StreamMode { OneLayer, Hierarchical };

std::string to_string(StreamMode mode);
StreamMode stream_mode_from_string(const std::string& s);

// Which streams exist. Precoder columns are ordered
// [global common | group commons 0..G-1 | privates 0..K-1]; in OneLayer mode
// the G group columns are allocated but forced to zero.
struct StreamLayout {
  std::size_t n_tx = 0;
  std::size_t n_users = 0;
  std::size_t n_groups = 1;
  std::vector<std::size_t> group_of;  // user -> group, 0-based
  StreamMode mode = StreamMode::OneLayer;

  // Users split into contiguous, as-equal-as-possible groups.
  static StreamLayout equal_groups(std::size_t n_tx, std::size_t n_users, std::size_t n_groups,
                                   StreamMode mode);

  std::size_t n_streams() const { return 1 + n_groups + n_users; }
  static constexpr std::size_t common_col() { return 0; }
  std::size_t group_col(std::size_t g) const { return 1 + g; }
  std::size_t private_col(std::size_t k) const { return 1 + n_groups + k; }
  bool hierarchical() const { return mode == StreamMode::Hierarchical; }

  // Columns that carry optimization variables, ascending.
  std::vector<std::size_t> active_columns() const;
  std::vector<std::size_t> members(std::size_t g) const;
  // Length of the real (re, im)-interleaved view of the active entries.
  std::size_t real_dim() const { return 2 * n_tx * active_columns().size(); }

  // Throws std::invalid_argument on an inconsistent layout.
  void validate() const;

  friend bool operator==(const StreamLayout&, const StreamLayout&) = default;
};

}  // namespace rsma::channel

#endif
