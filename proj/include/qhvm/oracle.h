// Copyright 2026 The qhvm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef QHVM_ORACLE_H
#define QHVM_ORACLE_H

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhvm/clifford.h"
#include "qhvm/pauli.h"

namespace qhvm {

/// Outcome string (first measurement leftmost) -> probability.
using Distribution = std::map<std::string, double>;

constexpr double kPsdTolerance = 1e-9;

double min_eigenvalue(const Eigen::MatrixXcd &m);
bool is_psd(const Eigen::MatrixXcd &m, double tolerance = kPsdTolerance);

/// Throws InvalidState unless rho is Hermitian (1e-12), PSD (-1e-9 floor)
/// and has unit trace (1e-12).
void validate_density_matrix(const Eigen::MatrixXcd &rho);

Eigen::MatrixXcd ket_to_density(const Eigen::VectorXcd &ket);
/// [[re, im], ...]; normalizes.
Eigen::VectorXcd ket_from_json(const nlohmann::json &j);

/// (I + (-1)^s T_a) / 2.
Eigen::MatrixXcd measurement_projector(const PauliIndex &a, int s);

double born_probability(const Eigen::MatrixXcd &rho, const PauliIndex &a, int s);
Eigen::MatrixXcd post_measurement_state(const Eigen::MatrixXcd &rho, const PauliIndex &a, int s);

/// Chain rule over a measurement sequence. Every outcome string is listed.
Distribution joint_distribution(const Eigen::MatrixXcd &rho, const std::vector<PauliIndex> &sequence);

/// Half the l1 distance. Missing strings count as probability 0; strings
/// of different lengths are an alphabet mismatch.
double total_variation(const Distribution &p, const Distribution &q);

Eigen::MatrixXcd apply_clifford(const Eigen::MatrixXcd &rho, const CliffordElement &g);

}  // namespace qhvm

#endif
