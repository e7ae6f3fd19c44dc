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

#ifndef RSMA_CHANNEL_SERIALIZE_HPP
#define RSMA_CHANNEL_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "rsma/channel/scene.hpp"

namespace rsma::channel {

inline constexpr int kEnsembleSchemaVersion = 1;

// {"rows", "cols", "re": [...], "im": [...]} with row-major entries.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// Ensemble dump:
// {"schema_version", "n_tx", "n_users", "m", "csit": <matrix>,
//  "whitened_csit": <matrix> (optional), "realizations": [<matrix>...]}
nlohmann::json ensemble_to_json(const ChannelEnsemble& ens);
ChannelEnsemble ensemble_from_json(const nlohmann::json& j);

void save_ensemble(const ChannelEnsemble& ens, const std::string& path);
ChannelEnsemble load_ensemble(const std::string& path);

}  // namespace rsma::channel

#endif
