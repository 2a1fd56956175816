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


#ifndef QHVM_CNC_H
#define QHVM_CNC_H

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qhvm/pauli.h"
#include "qhvm/polytope.h"

namespace qhvm {

/// gamma: packed key -> bit. Missing keys read as 0.
using ValueAssignment = std::map<std::uint64_t, int>;

struct CncSet {
    std::size_t n = 0;
    /// Sorted by packed key; always contains the identity.
    std::vector<PauliIndex> elements;
    bool maximal = false;

    bool contains(const PauliIndex &a) const;
    std::size_t size() const {
        return elements.size();
    }
};

/// Smallest superset of `seed` closed under a,b commuting => a+b.
std::vector<PauliIndex> inference_closure(std::size_t n, const std::vector<PauliIndex> &seed);

bool is_closed_under_inference(const std::vector<PauliIndex> &omega);

struct NoncontextualityResult {
    bool noncontextual = false;
    ValueAssignment assignment;
    /// Commuting pairs whose constraints add up to 0 = 1.
    std::vector<std::pair<PauliIndex, PauliIndex>> refutation;
};

NoncontextualityResult is_noncontextual(const std::vector<PauliIndex> &omega);

/// Every gamma satisfying the constraints on omega.
std::vector<ValueAssignment> value_assignments(const std::vector<PauliIndex> &omega);

bool is_consistent(const std::vector<PauliIndex> &omega, const ValueAssignment &gamma);

constexpr std::size_t kCncSearchCap = 2;

std::vector<CncSet> find_maximal_cnc(std::size_t n, std::size_t cap = kCncSearchCap);

/// (1/2^n) sum_{a in omega} (-1)^{gamma(a)} T_a.
ExactOp phase_point_operator(const CncSet &omega, const ValueAssignment &gamma);

/// All A_Omega^gamma over maximal cnc sets, deduplicated. Never complete.
VertexDictionary cnc_dictionary(std::size_t n, std::size_t cap = kCncSearchCap);

/// {n, convention, sets: [{elements, order, assignments}]}; assignments
/// are bit strings over `order` (the non-identity elements).
nlohmann::json cnc_catalog_json(const std::vector<CncSet> &sets);

}  // namespace qhvm

#endif
