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

#ifndef QHVM_PAULI_H
#define QHVM_PAULI_H

#include <Eigen/Dense>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhvm/error.h"
#include "qhvm/rational.h"

namespace qhvm {

constexpr std::size_t kMaxQubits = 32;

/// Identifier of the single global phase convention:
///     T_a = i^{|a_X & a_Z|} X(a_X) Z(a_Z),
/// which makes every T_a the plain tensor product of I, X, Y, Z with
/// Y = iXZ. Files carrying a different id are rejected on load.
inline constexpr const char *kPhaseConventionId = "tensor-pauli-xz-v1";

/// Element a = (a_X, a_Z) of E_n. Bit k of `x` / `z` refers to qubit k.
struct PauliIndex {
    std::size_t n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    static PauliIndex identity(std::size_t n);
    static PauliIndex single(std::size_t n, std::size_t qubit, char pauli);
    /// Parses strings like "XIZ" (qubit 0 first). '_' is accepted for I.
    static PauliIndex from_string(const std::string &text);
    /// Inverse of packed(): low n bits are a_X, next n bits are a_Z.
    static PauliIndex from_packed(std::size_t n, std::uint64_t key);

    std::uint64_t packed() const {
        return x | (z << n);
    }
    bool is_identity() const {
        return x == 0 && z == 0;
    }
    std::size_t weight() const {
        return static_cast<std::size_t>(std::popcount(x | z));
    }
    char qubit_pauli(std::size_t k) const;
    std::string str() const;
    /// Lower-case hex of packed(), zero padded to ceil(2n/4) digits.
    std::string hex() const;
    static PauliIndex from_hex(std::size_t n, const std::string &hex);

    bool operator==(const PauliIndex &other) const = default;
    std::strong_ordering operator<=>(const PauliIndex &other) const {
        if (auto c = n <=> other.n; c != 0) {
            return c;
        }
        return packed() <=> other.packed();
    }
};

PauliIndex add_indices(const PauliIndex &a, const PauliIndex &b);
PauliIndex operator+(const PauliIndex &a, const PauliIndex &b);

/// [a,b] = a_Z.b_X + b_Z.a_X mod 2. Zero iff T_a and T_b commute.
int symplectic_form(const PauliIndex &a, const PauliIndex &b);

/// Exponent beta in Z_4 with T_a T_b = i^beta T_{a+b}.
int product_phase(const PauliIndex &a, const PauliIndex &b);

/// For commuting a, b: T_a T_b = (-1)^{commuting_product_sign(a,b)} T_{a+b}.
int commuting_product_sign(const PauliIndex &a, const PauliIndex &b);

/// Dense 2^n x 2^n matrix of T_a. Qubit 0 is the leftmost tensor factor.
Eigen::MatrixXcd pauli_matrix(const PauliIndex &a);

/// Cap on the dense path (oracle, round trips).
constexpr std::size_t kMaxDenseQubits = 10;

/// Hermitian operator X = sum_a c_a T_a held as a sparse map from the packed
/// index to the real coefficient c_a. Zero coefficients are never stored.
template <typename T>
class PauliOp {
   public:
    using Scalar = T;

    PauliOp() = default;
    explicit PauliOp(std::size_t n) : n_(n) {
        if (n > kMaxQubits) {
            throw Error(ErrorKind::Capacity, "PauliOp: too many qubits");
        }
    }

    /// I / 2^n.
    static PauliOp maximally_mixed(std::size_t n) {
        PauliOp out(n);
        out.set(PauliIndex::identity(n), T(1) / T(std::uint64_t{1} << n));
        return out;
    }

    static PauliOp pauli(const PauliIndex &a) {
        PauliOp out(a.n);
        out.set(a, T(1));
        return out;
    }

    std::size_t num_qubits() const {
        return n_;
    }
    const std::map<std::uint64_t, T> &terms() const {
        return terms_;
    }

    T coefficient(const PauliIndex &a) const {
        check_index(a);
        auto it = terms_.find(a.packed());
        return it == terms_.end() ? T(0) : it->second;
    }

    void set(const PauliIndex &a, const T &value) {
        check_index(a);
        if (ScalarTraits<T>::exact ? ScalarTraits<T>::is_zero(value) : value == T(0)) {
            terms_.erase(a.packed());
        } else {
            terms_[a.packed()] = value;
        }
    }

    void add(const PauliIndex &a, const T &value) {
        set(a, coefficient(a) + value);
    }

    /// Tr(T_a X) = 2^n c_a.
    T expectation(const PauliIndex &a) const {
        return coefficient(a) * T(std::uint64_t{1} << n_);
    }

    T trace() const {
        return expectation(PauliIndex::identity(n_));
    }

    /// Pi_{a,s} X Pi_{a,s}. Anticommuting terms vanish; commuting terms
    /// split between T_b and T_{a+b}.
    PauliOp project(const PauliIndex &a, int s) const {
        check_index(a);
        PauliOp out(n_);
        for (const auto &[key, c] : terms_) {
            PauliIndex b = PauliIndex::from_packed(n_, key);
            if (symplectic_form(a, b) != 0) {
                continue;
            }
            T half = c / T(2);
            out.add(b, half);
            int sign = (s + commuting_product_sign(b, a)) & 1;
            out.add(b + a, sign ? T(-half) : half);
        }
        return out;
    }

    /// Coefficients indexed by packed key, length 4^n.
    std::vector<T> dense_coefficients() const {
        std::vector<T> out(std::size_t{1} << (2 * n_), T(0));
        for (const auto &[key, c] : terms_) {
            out[key] = c;
        }
        return out;
    }

    static PauliOp from_dense_coefficients(std::size_t n, const std::vector<T> &coeffs) {
        PauliOp out(n);
        for (std::size_t key = 0; key < coeffs.size(); ++key) {
            out.set(PauliIndex::from_packed(n, key), coeffs[key]);
        }
        return out;
    }

    PauliOp &operator+=(const PauliOp &other) {
        check_same(other);
        for (const auto &[key, c] : other.terms_) {
            add(PauliIndex::from_packed(n_, key), c);
        }
        return *this;
    }
    PauliOp &operator-=(const PauliOp &other) {
        check_same(other);
        for (const auto &[key, c] : other.terms_) {
            add(PauliIndex::from_packed(n_, key), T(-c));
        }
        return *this;
    }
    PauliOp &operator*=(const T &scale) {
        if (scale == T(0)) {
            terms_.clear();
            return *this;
        }
        for (auto &[key, c] : terms_) {
            c *= scale;
        }
        return *this;
    }
    friend PauliOp operator+(PauliOp a, const PauliOp &b) {
        a += b;
        return a;
    }
    friend PauliOp operator-(PauliOp a, const PauliOp &b) {
        a -= b;
        return a;
    }
    friend PauliOp operator*(const T &scale, PauliOp a) {
        a *= scale;
        return a;
    }
    bool operator==(const PauliOp &other) const {
        return n_ == other.n_ && terms_ == other.terms_;
    }

    /// Largest |c_a - d_a| over all indices.
    double max_abs_difference(const PauliOp &other) const {
        check_same(other);
        double worst = 0;
        auto a = dense_coefficients();
        auto b = other.dense_coefficients();
        for (std::size_t k = 0; k < a.size(); ++k) {
            worst = std::max(worst, std::fabs(ScalarTraits<T>::to_double(T(a[k] - b[k]))));
        }
        return worst;
    }

   private:
    void check_index(const PauliIndex &a) const {
        if (a.n != n_) {
            throw Error(ErrorKind::Dimension, "PauliOp: index has wrong qubit count");
        }
    }
    void check_same(const PauliOp &other) const {
        if (other.n_ != n_) {
            throw Error(ErrorKind::Dimension, "PauliOp: qubit count mismatch");
        }
    }

    std::size_t n_ = 0;
    std::map<std::uint64_t, T> terms_;
};

using ExactOp = PauliOp<Rational>;
using RealOp = PauliOp<double>;

RealOp to_real(const ExactOp &op);
/// Exact: each double coefficient becomes the dyadic rational it encodes.
ExactOp to_exact(const RealOp &op);

/// [I + (-1)^s T_a] / 2.
ExactOp projector(const PauliIndex &a, int s);

template <typename T>
T pauli_expectation(const PauliOp<T> &op, const PauliIndex &a) {
    return op.expectation(a);
}

template <typename T>
Eigen::MatrixXcd to_dense(const PauliOp<T> &op) {
    std::size_t n = op.num_qubits();
    if (n > kMaxDenseQubits) {
        throw Error(ErrorKind::Capacity, "to_dense: beyond the dense qubit cap");
    }
    std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &[key, c] : op.terms()) {
        out += ScalarTraits<T>::to_double(c) * pauli_matrix(PauliIndex::from_packed(n, key));
    }
    return out;
}

/// Pauli expansion of a dense matrix; rejects non-Hermitian input (1e-9).
RealOp from_dense(const Eigen::MatrixXcd &matrix);

/// {n, convention, terms: [[hex, numerator, denominator], ...]}.
nlohmann::json op_to_json(const ExactOp &op);
ExactOp op_from_json(const nlohmann::json &j);

}  // namespace qhvm

#endif
