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

#ifndef RSMA_GRADIENTS_GRADCHECK_HPP
#define RSMA_GRADIENTS_GRADCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rsma/gradients/gradients.hpp"

namespace rsma::grad {

struct GradcheckInstance {
  std::size_t n_tx = 0, n_users = 0, n_groups = 0, m = 0;
  channel::StreamMode mode = channel::StreamMode::OneLayer;
  bool scaled_branch = false;
  double precoder_error = 0.0;
  double theta_error = 0.0;
};

struct GradcheckSummary {
  std::vector<GradcheckInstance> instances;
  double max_precoder_error = 0.0;
  double max_theta_error = 0.0;
  std::size_t redraws = 0;  // candidates rejected for sitting near a kink
  double seconds = 0.0;

  bool passed(double tolerance = 1e-4) const {
    return max_precoder_error <= tolerance && max_theta_error <= tolerance;
  }
};

struct GradcheckOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 50;
  std::size_t max_tx = 4, max_users = 4, max_groups = 2, max_m = 8;
  double precoder_step = 1e-6;
  double theta_step = 1e-5;
};

// Random small instances away from min ties, ReLU kinks and the projection
// boundary; both gradients are compared with central differences.
GradcheckSummary run_gradcheck(const GradcheckOptions& opts);

}  // namespace rsma::grad

#endif
