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

#include "qhvm/stabilizer.h"

#include <algorithm>
#include <bit>
#include <set>

namespace qhvm {

namespace {

std::uint64_t pivot_bit(std::uint64_t key) {
    return key & (~key + 1);
}

// Reduced row echelon form of packed keys; dependent rows are dropped.
std::vector<std::uint64_t> rref(std::vector<std::uint64_t> rows) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r : rows) {
        for (std::uint64_t b : out) {
            if (r & pivot_bit(b)) {
                r ^= b;
            }
        }
        if (r == 0) {
            continue;
        }
        std::uint64_t p = pivot_bit(r);
        for (std::uint64_t &b : out) {
            if (b & p) {
                b ^= r;
            }
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
        return pivot_bit(a) < pivot_bit(b);
    });
    return out;
}

// Expresses `key` in the canonical basis; returns the combination mask and
// whether the expansion is exact.
std::pair<std::uint64_t, bool> expand(const std::vector<PauliIndex> &basis, std::uint64_t key) {
    std::uint64_t combination = 0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        std::uint64_t row = basis[k].packed();
        if (key & pivot_bit(row)) {
            key ^= row;
            combination |= std::uint64_t{1} << k;
        }
    }
    return {combination, key == 0};
}

std::size_t count_maximal_isotropics(std::size_t n) {
    std::size_t count = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        count *= (std::size_t{1} << k) + 1;
    }
    return count;
}

}  // namespace

IsotropicSubspace IsotropicSubspace::from_generators(std::size_t n, const std::vector<PauliIndex> &generators) {
    std::vector<std::uint64_t> keys;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].n != n) {
            throw Error(ErrorKind::Dimension, "IsotropicSubspace: generator qubit count mismatch");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (symplectic_form(generators[i], generators[j]) != 0) {
                throw Error(ErrorKind::Domain, "IsotropicSubspace: generators " + generators[j].str() + " and " +
                                                   generators[i].str() + " anticommute");
            }
        }
        keys.push_back(generators[i].packed());
    }
    IsotropicSubspace out;
    out.n = n;
    for (std::uint64_t key : rref(keys)) {
        out.basis.push_back(PauliIndex::from_packed(n, key));
    }
    return out;
}

bool IsotropicSubspace::contains(const PauliIndex &a) const {
    if (a.n != n) {
        throw Error(ErrorKind::Dimension, "IsotropicSubspace::contains: qubit count mismatch");
    }
    return expand(basis, a.packed()).second;
}

PauliIndex IsotropicSubspace::element(std::uint64_t combination) const {
    PauliIndex out = PauliIndex::identity(n);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if ((combination >> k) & 1) {
            out = out + basis[k];
        }
    }
    return out;
}

std::vector<PauliIndex> IsotropicSubspace::elements() const {
    std::vector<PauliIndex> out;
    out.reserve(size());
    for (std::uint64_t c = 0; c < size(); ++c) {
        out.push_back(element(c));
    }
    return out;
}

bool IsotropicSubspace::operator==(const IsotropicSubspace &other) const {
    return n == other.n && basis == other.basis;
}

bool IsotropicSubspace::operator<(const IsotropicSubspace &other) const {
    if (n != other.n) {
        return n < other.n;
    }
    return std::lexicographical_compare(basis.begin(), basis.end(), other.basis.begin(), other.basis.end());
}

std::vector<IsotropicSubspace> enumerate_maximal_isotropics(std::size_t n, std::size_t cap) {
    if (n < 1) {
        throw Error(ErrorKind::Domain, "enumerate_maximal_isotropics: n must be at least 1");
    }
    if (n > cap) {
        throw Error(ErrorKind::Capacity, "enumerate_maximal_isotropics: n exceeds the enumeration cap");
    }
    std::uint64_t total = std::uint64_t{1} << (2 * n);
    std::set<std::vector<std::uint64_t>> seen;

    // Depth-first over increasing keys; `span` is the current subspace.
    std::vector<std::uint64_t> chosen;
    auto recurse = [&](auto &&self, std::uint64_t start, const std::vector<std::uint64_t> &span) -> void {
        if (chosen.size() == n) {
            seen.insert(rref(chosen));
            return;
        }
        for (std::uint64_t key = start; key < total; ++key) {
            if (std::find(span.begin(), span.end(), key) != span.end()) {
                continue;
            }
            PauliIndex candidate = PauliIndex::from_packed(n, key);
            bool commutes = true;
            for (std::uint64_t c : chosen) {
                if (symplectic_form(candidate, PauliIndex::from_packed(n, c)) != 0) {
                    commutes = false;
                    break;
                }
            }
            if (!commutes) {
                continue;
            }
            std::vector<std::uint64_t> next_span = span;
            for (std::uint64_t e : span) {
                next_span.push_back(e ^ key);
            }
            chosen.push_back(key);
            self(self, key + 1, next_span);
            chosen.pop_back();
        }
    };
    recurse(recurse, 1, {0});

    std::vector<IsotropicSubspace> out;
    for (const auto &keys : seen) {
        IsotropicSubspace s;
        s.n = n;
        for (std::uint64_t k : keys) {
            s.basis.push_back(PauliIndex::from_packed(n, k));
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    if (out.size() != count_maximal_isotropics(n)) {
        throw Error(ErrorKind::Internal, "enumerate_maximal_isotropics: count mismatch");
    }
    return out;
}

StabilizerState StabilizerState::from_generators(std::size_t n, const std::vector<PauliIndex> &generators,
                                                 const std::vector<int> &signs) {
    if (generators.size() != signs.size()) {
        throw Error(ErrorKind::InvalidState, "StabilizerState: one sign per generator required");
    }
    IsotropicSubspace subspace = IsotropicSubspace::from_generators(n, generators);
    if (!subspace.is_maximal()) {
        throw Error(ErrorKind::InvalidState, "StabilizerState: generators do not span a maximal isotropic subspace");
    }
    // Signed group closure, checking consistency of redundant generators.
    std::map<std::uint64_t, int> values{{0, 0}};
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const PauliIndex &gen = generators[g];
        int gen_value = signs[g] & 1;
        std::vector<std::pair<std::uint64_t, int>> current(values.begin(), values.end());
        for (const auto &[key, value] : current) {
            PauliIndex e = PauliIndex::from_packed(n, key);
            int v = (value + gen_value + commuting_product_sign(e, gen)) & 1;
            std::uint64_t target = (e + gen).packed();
            auto it = values.find(target);
            if (it == values.end()) {
                values.emplace(target, v);
            } else if (it->second != v) {
                throw Error(ErrorKind::InvalidState, "StabilizerState: inconsistent generator signs (-I in the group)");
            }
        }
    }
    std::vector<int> basis_values;
    for (const PauliIndex &row : subspace.basis) {
        basis_values.push_back(values.at(row.packed()));
    }
    StabilizerState out;
    out.subspace_ = std::move(subspace);
    out.signs_ = std::move(basis_values);
    return out;
}

StabilizerState StabilizerState::from_canonical(const IsotropicSubspace &subspace, const std::vector<int> &signs) {
    IsotropicSubspace check = IsotropicSubspace::from_generators(subspace.n, subspace.basis);
    if (!(check == subspace) || !subspace.is_maximal()) {
        throw Error(ErrorKind::InvalidState, "StabilizerState: basis is not canonical and maximal");
    }
    if (signs.size() != subspace.basis.size()) {
        throw Error(ErrorKind::InvalidState, "StabilizerState: one value per basis row required");
    }
    StabilizerState out;
    out.subspace_ = subspace;
    for (int s : signs) {
        out.signs_.push_back(s & 1);
    }
    return out;
}

int StabilizerState::value(const PauliIndex &a) const {
    auto [combination, exact] = expand(subspace_.basis, a.packed());
    if (!exact) {
        throw Error(ErrorKind::Domain, "StabilizerState::value: " + a.str() + " is not in the stabilizer group");
    }
    PauliIndex e = PauliIndex::identity(subspace_.n);
    int v = 0;
    for (std::size_t k = 0; k < subspace_.basis.size(); ++k) {
        if ((combination >> k) & 1) {
            v += signs_[k] + commuting_product_sign(e, subspace_.basis[k]);
            e = e + subspace_.basis[k];
        }
    }
    return v & 1;
}

int StabilizerState::expectation(const PauliIndex &a) const {
    if (!subspace_.contains(a)) {
        return 0;
    }
    return value(a) ? -1 : 1;
}

ExactOp StabilizerState::projector() const {
    std::size_t n = subspace_.n;
    ExactOp out(n);
    Rational magnitude = dyadic(1, static_cast<unsigned>(n));
    for (const PauliIndex &a : subspace_.elements()) {
        out.set(a, value(a) ? Rational(-magnitude) : magnitude);
    }
    return out;
}

bool StabilizerState::operator<(const StabilizerState &other) const {
    if (!(subspace_ == other.subspace_)) {
        return subspace_ < other.subspace_;
    }
    return signs_ < other.signs_;
}

std::vector<StabilizerState> enumerate_stabilizer_states(std::size_t n, std::size_t cap) {
    std::vector<StabilizerState> out;
    for (const IsotropicSubspace &subspace : enumerate_maximal_isotropics(n, cap)) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            std::vector<int> signs(n);
            // Row 0 is the most significant bit so the list stays sorted.
            for (std::size_t k = 0; k < n; ++k) {
                signs[k] = (bits >> (n - 1 - k)) & 1;
            }
            out.push_back(StabilizerState::from_canonical(subspace, signs));
        }
    }
    return out;
}

MeasurementUpdate measure_stabilizer(const StabilizerState &state, const PauliIndex &a, int s) {
    if (a.is_identity()) {
        throw Error(ErrorKind::InvalidObservable, "measure_stabilizer: the identity is not an observable");
    }
    const auto &basis = state.subspace().basis;
    const auto &values = state.basis_values();
    std::size_t n = state.num_qubits();
    std::size_t pivot = basis.size();
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (symplectic_form(basis[k], a) != 0) {
            pivot = k;
            break;
        }
    }
    if (pivot == basis.size()) {
        // a commutes with a maximal isotropic subspace, so it lies inside.
        if (state.value(a) == (s & 1)) {
            return {Rational(1), state};
        }
        return {Rational(0), std::nullopt};
    }
    std::vector<PauliIndex> generators{a};
    std::vector<int> signs{s & 1};
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (k == pivot) {
            continue;
        }
        if (symplectic_form(basis[k], a) != 0) {
            generators.push_back(basis[k] + basis[pivot]);
            signs.push_back((values[k] + values[pivot] + commuting_product_sign(basis[k], basis[pivot])) & 1);
        } else {
            generators.push_back(basis[k]);
            signs.push_back(values[k]);
        }
    }
    return {Rational(1, 2), StabilizerState::from_generators(n, generators, signs)};
}

StabilizerCatalog::StabilizerCatalog(std::size_t n, std::size_t cap)
    : n_(n), states_(enumerate_stabilizer_states(n, cap)) {
    for (std::size_t id = 0; id < states_.size(); ++id) {
        ids_.emplace(states_[id], id);
    }
}

std::size_t StabilizerCatalog::id_of(const StabilizerState &state) const {
    auto it = ids_.find(state);
    if (it == ids_.end()) {
        throw Error(ErrorKind::InvalidState, "StabilizerCatalog: state not in catalog");
    }
    return it->second;
}

nlohmann::json StabilizerCatalog::to_json() const {
    nlohmann::json records = nlohmann::json::array();
    for (std::size_t id = 0; id < states_.size(); ++id) {
        nlohmann::json basis = nlohmann::json::array();
        for (const PauliIndex &row : states_[id].subspace().basis) {
            basis.push_back(row.hex());
        }
        records.push_back({{"id", id}, {"basis", basis}, {"lambda", states_[id].basis_values()}});
    }
    return {{"n", n_}, {"convention", kPhaseConventionId}, {"states", records}};
}

}  // namespace qhvm
