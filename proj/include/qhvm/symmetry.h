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


#ifndef QHVM_SYMMETRY_H
#define QHVM_SYMMETRY_H

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhvm/clifford.h"
#include "qhvm/hvm.h"
#include "qhvm/polytope.h"

namespace qhvm {

/// g X g^dagger.
template <typename T>
PauliOp<T> act_on_operator(const CliffordElement &g, const PauliOp<T> &op) {
    return g.act(op);
}

/// image[alpha] is the id of g A_alpha g^dagger; empty where the image is
/// not in the dictionary.
struct VertexPermutation {
    CliffordElement g;
    std::vector<std::optional<std::size_t>> image;

    bool complete() const;
    std::size_t operator()(std::size_t alpha) const;
};

/// Throws Internal (completeness violation) if an image is missing from a
/// dictionary marked complete. Incomplete dictionaries give partial orbits.
VertexPermutation vertex_orbit(const CliffordElement &g, const VertexDictionary &dict);

/// True iff pi_g o pi_h == pi_{g h} wherever all three are defined.
bool is_group_action(const VertexPermutation &g, const VertexPermutation &h, const VertexPermutation &gh);

struct CovarianceCheck {
    bool ok = false;
    /// Coefficient distance between sum_alpha W_A(alpha) A_{g alpha} and g A g^dagger.
    double residual = 0;
};

/// Decomposes A, pushes the weights along pi_g and checks the result
/// represents g A g^dagger.
CovarianceCheck check_covariance(const CliffordElement &g, const RealOp &a, const VertexDictionary &dict,
                                 double tol = 1e-9);
CovarianceCheck check_covariance(const VertexPermutation &pi, const RealOp &a, const VertexDictionary &dict,
                                 double tol = 1e-9);

/// W~_A over vertex ids.
struct DualFunction {
    std::vector<double> values;
};

/// W~ of Pi_{a,s}: Q_a(s | alpha).
DualFunction dual_of_projector(const PauliIndex &a, int s, KernelCache &cache);
/// Linear extension over the Pauli basis: W~_I = 1, W~_{T_a} = Q_a(0|.) - Q_a(1|.).
DualFunction dual_function(const RealOp &a, KernelCache &cache);

struct CriterionResult {
    std::string name;
    /// PASS, FAIL or FAILED-BY-DESIGN.
    std::string status;
    double residual = 0;
    std::string detail;
};

struct SwReport {
    std::size_t n = 0;
    std::string dictionary_hash;
    std::vector<CriterionResult> criteria;

    /// All criteria other than linearity pass.
    bool passed() const;
    const CriterionResult &at(const std::string &name) const;
    nlohmann::json to_json() const;
};

/// Linearity, reality, standardization, covariance and traciality on a
/// complete dictionary. `samples` random states are drawn with `seed`.
SwReport sw_checks(const VertexDictionary &dict, KernelCache &cache, std::uint64_t seed = 1,
                   std::size_t samples = 50, double tol = 1e-9);

/// [{g, permutation}] with -1 for images outside the dictionary.
nlohmann::json orbit_table_json(const std::vector<VertexPermutation> &orbits);

}  // namespace qhvm

#endif
