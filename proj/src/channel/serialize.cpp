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

#include "rsma/channel/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace rsma::channel {

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (const auto& z : m.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != rows * cols || im.size() != rows * cols)
    throw std::invalid_argument("matrix json: re/im length does not match rows x cols");
  std::vector<numerics::cplx> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {re[i].get<double>(), im[i].get<double>()};
  return CMatrix(rows, cols, std::move(data));
}

nlohmann::json ensemble_to_json(const ChannelEnsemble& ens) {
  nlohmann::json j;
  j["schema_version"] = kEnsembleSchemaVersion;
  j["n_tx"] = ens.n_tx();
  j["n_users"] = ens.n_users();
  j["m"] = ens.m();
  j["csit"] = matrix_to_json(ens.csit);
  if (!ens.whitened_csit.empty()) j["whitened_csit"] = matrix_to_json(ens.whitened_csit);
  nlohmann::json reals = nlohmann::json::array();
  for (const auto& h : ens.realizations) reals.push_back(matrix_to_json(h));
  j["realizations"] = std::move(reals);
  return j;
}

ChannelEnsemble ensemble_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kEnsembleSchemaVersion)
    throw std::invalid_argument("ensemble json: unsupported schema_version");
  ChannelEnsemble ens;
  ens.csit = matrix_from_json(j.at("csit"));
  if (j.contains("whitened_csit")) ens.whitened_csit = matrix_from_json(j.at("whitened_csit"));
  for (const auto& h : j.at("realizations")) {
    ens.realizations.push_back(matrix_from_json(h));
    if (ens.realizations.back().rows() != ens.csit.rows() || ens.realizations.back().cols() != ens.csit.cols())
      throw std::invalid_argument("ensemble json: realization shape differs from csit");
  }
  if (ens.m() != j.at("m").get<std::size_t>()) throw std::invalid_argument("ensemble json: m mismatch");
  return ens;
}

void save_ensemble(const ChannelEnsemble& ens, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << ensemble_to_json(ens).dump();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ChannelEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return ensemble_from_json(nlohmann::json::parse(in));
}

}  // namespace rsma::channel
