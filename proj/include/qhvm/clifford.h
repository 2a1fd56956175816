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


#ifndef QHVM_CLIFFORD_H
#define QHVM_CLIFFORD_H

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qhvm/pauli.h"

namespace qhvm {

/// A Pauli with a sign bit: (-1)^sign T_index.
struct SignedPauli {
    PauliIndex index;
    int sign = 0;

    bool operator==(const SignedPauli &other) const = default;
};

/// Product of two signed Paulis; throws Domain if they anticommute.
SignedPauli multiply_commuting(const SignedPauli &p, const SignedPauli &q);

/// Clifford element modulo global phase, stored as the images of the basis
/// generators X_0..X_{n-1}, Z_0..Z_{n-1} under g (.) g^dagger.
class CliffordElement {
   public:
    CliffordElement() = default;

    static CliffordElement identity(std::size_t n);
    /// images[k] for X_k (k < n) and Z_{k-n} (k >= n). Throws Domain unless
    /// the images preserve the symplectic form.
    static CliffordElement from_images(std::size_t n, std::vector<SignedPauli> images);
    /// Builds the element whose action on each generator is `action`. The
    /// caller guarantees it is a Clifford action.
    static CliffordElement from_action(std::size_t n, const std::function<SignedPauli(const PauliIndex &)> &action);

    static CliffordElement hadamard(std::size_t n, std::size_t q);
    /// S = diag(1, i): X -> Y.
    static CliffordElement phase(std::size_t n, std::size_t q);
    static CliffordElement phase_dagger(std::size_t n, std::size_t q);
    static CliffordElement cnot(std::size_t n, std::size_t control, std::size_t target);
    static CliffordElement cz(std::size_t n, std::size_t a, std::size_t b);
    static CliffordElement swap(std::size_t n, std::size_t a, std::size_t b);
    /// Conjugation by T_p.
    static CliffordElement pauli(const PauliIndex &p);
    /// (G + O)/sqrt(2) for anticommuting signed Paulis G, O.
    static CliffordElement pauli_reflection(const SignedPauli &g, const SignedPauli &o);

    std::size_t num_qubits() const {
        return n_;
    }
    const std::vector<SignedPauli> &images() const {
        return images_;
    }

    /// g T_a g^dagger.
    SignedPauli conjugate(const PauliIndex &a) const;
    SignedPauli conjugate(const SignedPauli &a) const;
    /// g^dagger T_a g.
    SignedPauli conjugate_inverse(const PauliIndex &a) const;

    /// (this * other): conjugation by `other` first, then by this.
    CliffordElement compose(const CliffordElement &other) const;
    CliffordElement inverse() const;

    template <typename T>
    PauliOp<T> act(const PauliOp<T> &op) const {
        PauliOp<T> out(op.num_qubits());
        for (const auto &[key, c] : op.terms()) {
            SignedPauli img = conjugate(PauliIndex::from_packed(n_, key));
            out.add(img.index, img.sign ? T(-c) : c);
        }
        return out;
    }

    bool operator==(const CliffordElement &other) const = default;
    bool operator<(const CliffordElement &other) const;

    nlohmann::json to_json() const;
    static CliffordElement from_json(const nlohmann::json &j);

   private:
    std::size_t n_ = 0;
    std::vector<SignedPauli> images_;
};

constexpr std::size_t kCliffordEnumerationCap = 2;

/// All elements modulo phase, identity first: 24 for n=1, 11520 for n=2.
std::vector<CliffordElement> enumerate_clifford(std::size_t n, std::size_t cap = kCliffordEnumerationCap);

/// A dense unitary realizing g, fixed up to a global phase.
Eigen::MatrixXcd clifford_unitary(const CliffordElement &g);

}  // namespace qhvm

#endif
