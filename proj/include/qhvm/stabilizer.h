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

#ifndef QHVM_STABILIZER_H
#define QHVM_STABILIZER_H

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qhvm/pauli.h"

namespace qhvm {

/// Default cap on n for exhaustive stabilizer enumeration.
constexpr std::size_t kDefaultEnumerationCap = 3;

/// Isotropic subspace of E_n held by its canonical basis: reduced row echelon
/// form over Z_2 with columns ordered x_0..x_{n-1}, z_0..z_{n-1}. A row's
/// pivot is its lowest set bit of PauliIndex::packed().
struct IsotropicSubspace {
    std::size_t n = 0;
    std::vector<PauliIndex> basis;

    /// Validates commutation, drops dependent generators, canonicalizes.
    static IsotropicSubspace from_generators(std::size_t n, const std::vector<PauliIndex> &generators);

    bool is_maximal() const {
        return basis.size() == n;
    }
    std::size_t size() const {
        return std::size_t{1} << basis.size();
    }
    bool contains(const PauliIndex &a) const;
    /// Element whose basis expansion has bit k set for row k, k < basis.size().
    PauliIndex element(std::uint64_t combination) const;
    std::vector<PauliIndex> elements() const;

    bool operator==(const IsotropicSubspace &other) const;
    bool operator<(const IsotropicSubspace &other) const;
};

/// All maximal isotropic subspaces of E_n, sorted by canonical basis.
std::vector<IsotropicSubspace> enumerate_maximal_isotropics(std::size_t n,
                                                            std::size_t cap = kDefaultEnumerationCap);

/// Pure stabilizer state: a maximal isotropic subspace with the value
/// assignment lambda stored on the canonical basis rows. The signed stabilizer
/// group is {(-1)^{lambda(a)} T_a : a in the subspace}.
class StabilizerState {
   public:
    StabilizerState() = default;

    /// Builds the state stabilized by (-1)^{signs[k]} T_{generators[k]}.
    /// Generators may be redundant, but must commute, span a maximal
    /// subspace, and carry consistent signs.
    static StabilizerState from_generators(std::size_t n, const std::vector<PauliIndex> &generators,
                                           const std::vector<int> &signs);
    /// From canonical basis and its value bits. Throws if the basis is not
    /// canonical and maximal.
    static StabilizerState from_canonical(const IsotropicSubspace &subspace, const std::vector<int> &signs);

    std::size_t num_qubits() const {
        return subspace_.n;
    }
    const IsotropicSubspace &subspace() const {
        return subspace_;
    }
    const std::vector<int> &basis_values() const {
        return signs_;
    }

    /// lambda(a) for a in the subspace, extended by
    /// lambda(a+b) = lambda(a) + lambda(b) + beta(a,b)/2.
    int value(const PauliIndex &a) const;
    /// Tr(|sigma><sigma| T_a) in {-1, 0, 1}.
    int expectation(const PauliIndex &a) const;
    /// (1/2^n) sum_{a in I} (-1)^{lambda(a)} T_a.
    ExactOp projector() const;

    bool operator==(const StabilizerState &other) const = default;
    bool operator<(const StabilizerState &other) const;

   private:
    IsotropicSubspace subspace_;
    std::vector<int> signs_;
};

/// All 2^n prod_{k=1..n}(2^k+1) pure stabilizer states, sorted; the position
/// in this list is the state-id.
std::vector<StabilizerState> enumerate_stabilizer_states(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

struct MeasurementUpdate {
    /// c in {0, 1/2, 1} with Pi_{a,s}|s><s|Pi_{a,s} = c |s'><s'|.
    Rational weight;
    std::optional<StabilizerState> post;
};

/// Pauli measurement update of a stabilizer state.
MeasurementUpdate measure_stabilizer(const StabilizerState &state, const PauliIndex &a, int s);

/// Indexed list of stabilizer states with id lookup.
class StabilizerCatalog {
   public:
    explicit StabilizerCatalog(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

    std::size_t num_qubits() const {
        return n_;
    }
    std::size_t size() const {
        return states_.size();
    }
    const StabilizerState &operator[](std::size_t id) const {
        return states_[id];
    }
    const std::vector<StabilizerState> &states() const {
        return states_;
    }
    std::size_t id_of(const StabilizerState &state) const;

    /// One record per state: {id, basis: [hex...], lambda: [bits]}.
    nlohmann::json to_json() const;

   private:
    std::size_t n_;
    std::vector<StabilizerState> states_;
    std::map<StabilizerState, std::size_t> ids_;
};

}  // namespace qhvm

#endif
