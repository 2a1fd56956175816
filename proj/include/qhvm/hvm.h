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


#ifndef QHVM_HVM_H
#define QHVM_HVM_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qhvm/polytope.h"

namespace qhvm {

/// Probability function over the vertices of a dictionary.
struct ProbVector {
    std::uint64_t dictionary_hash = 0;
    std::vector<double> weights;
    /// Present when the decomposition was solved in exact arithmetic.
    std::optional<std::vector<Rational>> exact;
    /// Largest coefficient deviation of sum_alpha p(alpha) A_alpha from the target.
    double residual = 0;

    std::vector<std::size_t> support() const;
    static ProbVector delta(const VertexDictionary &dict, std::size_t alpha);
};

/// LP infeasibility. `certificate` is y over the 4^n Pauli coefficient
/// rows with y.A_alpha <= 0 for every vertex and y.target > 0.
class InfeasibleDecomposition : public Error {
   public:
    InfeasibleDecomposition(const std::string &what, std::vector<double> certificate)
        : Error(ErrorKind::Infeasible, what), certificate_(std::move(certificate)) {
    }
    const std::vector<double> &certificate() const {
        return certificate_;
    }

   private:
    std::vector<double> certificate_;
};

constexpr double kDecompositionTolerance = 1e-9;

ProbVector decompose_state(const ExactOp &rho, const VertexDictionary &dict);
/// Floating point solve; negative slack down to -1e-12 is clamped.
ProbVector decompose_state(const RealOp &rho, const VertexDictionary &dict);

RealOp reconstruct(const ProbVector &p, const VertexDictionary &dict);
ExactOp reconstruct_exact(const ProbVector &p, const VertexDictionary &dict);

struct KernelEntry {
    std::size_t beta = 0;
    int outcome = 0;
    Rational weight;
};

struct TransitionKernel {
    std::size_t alpha = 0;
    PauliIndex measurement;
    /// Nonzero entries sorted by (outcome, beta).
    std::vector<KernelEntry> entries;

    Rational exact_marginal(int s) const;
    double marginal(int s) const {
        return exact_marginal(s).get_d();
    }
    std::vector<KernelEntry> branch(int s) const;
};

/// Rejects kernels that fail the reconstruction identity or normalization.
void validate_kernel(const TransitionKernel &kernel, const VertexDictionary &dict);

/// Solves q_{alpha,a}, maximizing the weight that stays on alpha. Ties are
/// broken by Bland's rule on dictionary order rotated to start at alpha.
TransitionKernel solve_kernel(std::size_t alpha, const PauliIndex &a, const VertexDictionary &dict);

class KernelCache {
   public:
    explicit KernelCache(std::shared_ptr<const VertexDictionary> dict);

    const VertexDictionary &dictionary() const {
        return *dict_;
    }
    std::uint64_t dictionary_hash() const {
        return hash_;
    }

    /// Returns the cached kernel, solving it on first request.
    const TransitionKernel &get(std::size_t alpha, const PauliIndex &a);
    bool contains(std::size_t alpha, const PauliIndex &a) const;
    std::size_t size() const;

    nlohmann::json to_json() const;
    /// Merges records from a file; every kernel is revalidated.
    void load_json(const nlohmann::json &j);
    void save(const std::string &path) const;
    void load(const std::string &path);

   private:
    using Key = std::pair<std::size_t, std::uint64_t>;
    std::shared_ptr<const VertexDictionary> dict_;
    std::uint64_t hash_;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::unique_ptr<const TransitionKernel>> kernels_;
};

double outcome_marginal(const TransitionKernel &kernel, int s);

double born_probability_hvm(const ProbVector &p, const PauliIndex &a, int s, KernelCache &cache);
Rational born_probability_hvm_exact(const ProbVector &p, const PauliIndex &a, int s, KernelCache &cache);

nlohmann::json prob_vector_to_json(const ProbVector &p);
ProbVector prob_vector_from_json(const nlohmann::json &j, const VertexDictionary &dict);

}  // namespace qhvm

#endif
