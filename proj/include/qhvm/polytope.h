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

#ifndef QHVM_POLYTOPE_H
#define QHVM_POLYTOPE_H

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhvm/pauli.h"
#include "qhvm/stabilizer.h"

namespace qhvm {

/// One facet inequality offset + normal . c >= 0, where c runs over the
/// non-identity Pauli coefficients (packed keys 1 .. 4^n - 1) and the row
/// value equals Tr(|sigma><sigma| X).
struct HalfspaceRow {
    std::size_t state_id = 0;
    std::vector<int> normal;
};

/// Halfspace form of the polytope: one row per pure stabilizer state.
class HalfspaceSystem {
   public:
    explicit HalfspaceSystem(std::size_t n);

    std::size_t num_qubits() const {
        return n_;
    }
    /// 4^n - 1: the trace-normalized hyperplane's dimension.
    std::size_t dimension() const {
        return (std::size_t{1} << (2 * n_)) - 1;
    }
    const Rational &offset() const {
        return offset_;
    }
    const std::vector<HalfspaceRow> &rows() const {
        return rows_;
    }
    const StabilizerCatalog &catalog() const {
        return *catalog_;
    }

    template <typename T>
    T evaluate(std::size_t row, const PauliOp<T> &op) const {
        const auto &normal = rows_[row].normal;
        T value = ScalarTraits<T>::from_rational(offset_);
        for (const auto &[key, c] : op.terms()) {
            if (key != 0) {
                int w = normal[key - 1];
                if (w > 0) {
                    value += c;
                } else if (w < 0) {
                    value -= c;
                }
            }
        }
        return value;
    }

   private:
    std::size_t n_;
    Rational offset_;
    std::shared_ptr<const StabilizerCatalog> catalog_;
    std::vector<HalfspaceRow> rows_;
};

HalfspaceSystem build_halfspaces(std::size_t n);

enum class Region { Inside, Boundary, Outside };

const char *region_name(Region region);

struct MembershipVerdict {
    Region region = Region::Inside;
    /// Rows evaluating to zero (within the band for floating point input).
    std::vector<std::size_t> active;
    /// Rows evaluating negative, with their values.
    std::vector<std::size_t> violated;
    std::vector<double> violated_values;
    /// Smallest row value.
    double min_value = 0;
};

/// Band used for floating point membership.
constexpr double kMembershipTolerance = 1e-9;

/// Exact rows for rational input; rows within `tolerance` of zero count as
/// active for floating point input. The trace must be 1 (exactly, or within
/// the band) and is never rescaled.
template <typename T>
MembershipVerdict membership(const PauliOp<T> &op, const HalfspaceSystem &system,
                             double tolerance = kMembershipTolerance) {
    if (op.num_qubits() != system.num_qubits()) {
        throw Error(ErrorKind::Dimension, "membership: qubit count mismatch");
    }
    T trace = op.trace();
    if constexpr (ScalarTraits<T>::exact) {
        if (trace != T(1)) {
            throw Error(ErrorKind::Domain, "membership: operator trace is not 1");
        }
    } else {
        if (std::fabs(trace - 1.0) > tolerance) {
            throw Error(ErrorKind::Domain, "membership: operator trace is not 1");
        }
    }
    MembershipVerdict verdict;
    verdict.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < system.rows().size(); ++r) {
        T value = system.evaluate(r, op);
        double v = ScalarTraits<T>::to_double(value);
        verdict.min_value = std::min(verdict.min_value, v);
        bool zero;
        bool negative;
        if constexpr (ScalarTraits<T>::exact) {
            zero = sgn(value) == 0;
            negative = sgn(value) < 0;
        } else {
            zero = std::fabs(v) <= tolerance;
            negative = v < -tolerance;
        }
        if (zero) {
            verdict.active.push_back(r);
        } else if (negative) {
            verdict.violated.push_back(r);
            verdict.violated_values.push_back(v);
        }
    }
    if (!verdict.violated.empty()) {
        verdict.region = Region::Outside;
    } else if (!verdict.active.empty()) {
        verdict.region = Region::Boundary;
    } else {
        verdict.region = Region::Inside;
    }
    return verdict;
}

enum class Provenance { Enumerated, CncGenerated, Loaded };

const char *provenance_name(Provenance p);
Provenance provenance_from_name(const std::string &name);

/// Indexed set of phase-point operators. Vertex ids are positions after the
/// canonical sort by coefficient vector (see canonicalize()).
struct VertexDictionary {
    std::size_t n = 0;
    std::vector<ExactOp> vertices;
    std::vector<Provenance> provenance;
    bool complete = false;

    std::size_t size() const {
        return vertices.size();
    }
    /// Sorts by dense coefficient vector and removes exact duplicates.
    void canonicalize();
    std::optional<std::size_t> index_of(const ExactOp &op) const;
    /// FNV-1a 64 of the canonical serialization; keys kernel caches.
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

/// Lexicographic order on dense coefficient vectors.
bool coefficient_less(const ExactOp &a, const ExactOp &b);

struct EnumerationBudget {
    std::size_t max_vertices = 2'000'000;
    double max_seconds = std::numeric_limits<double>::infinity();
    /// Called after each inserted row with (rows inserted, current vertex count).
    std::function<void(std::size_t, std::size_t)> on_insertion;
};

/// Thrown when the double description run exceeds its budget. Carries the
/// vertices of the intermediate polytope (not vertices of the target).
class PartialEnumeration : public Error {
   public:
    PartialEnumeration(const std::string &what, VertexDictionary partial, std::size_t rows_inserted)
        : Error(ErrorKind::Budget, what), partial_(std::move(partial)), rows_inserted_(rows_inserted) {
    }
    const VertexDictionary &partial() const {
        return partial_;
    }
    std::size_t rows_inserted() const {
        return rows_inserted_;
    }

   private:
    VertexDictionary partial_;
    std::size_t rows_inserted_;
};

/// Double description: start from the bounding hypercube |Tr(T_a X)| <= 1 and
/// insert stabilizer rows in state-id order, in exact arithmetic. Supported
/// for n <= 2.
VertexDictionary enumerate_vertices(const HalfspaceSystem &system, const EnumerationBudget &budget = {});

/// True iff the active rows at `op` pin a unique point of the trace-one
/// hyperplane (rank 4^n - 1). Throws Domain if `op` lies outside.
bool certify_vertex(const ExactOp &op, const HalfspaceSystem &system);
/// Rank of the active rows' normals.
std::size_t active_rank(const ExactOp &op, const HalfspaceSystem &system);

struct BoundednessCertificate {
    PauliIndex direction;
    int sign = 0;
    /// Rows whose sum is Tr(Pi_{a,s} X) = 1/2 + (-1)^s 2^{n-1} c_a.
    std::vector<std::size_t> state_ids;
};

struct BoundednessReport {
    bool bounded = false;
    std::vector<BoundednessCertificate> certificates;
    std::optional<PauliIndex> offending;
};

/// Proves |Tr(T_a X)| <= 1 on the polytope for every a != 0 by summing the
/// stabilizer rows of one maximal isotropic subspace containing a.
BoundednessReport boundedness_check(const HalfspaceSystem &system);

/// Every vertex satisfies |Tr(T_a A)| <= 1 exactly.
bool within_hypercube(const VertexDictionary &dict);

nlohmann::json dictionary_to_json(const VertexDictionary &dict);
/// Validates convention, membership of every vertex, duplicates, and count.
/// Loaded vertices keep the provenance recorded in the file.
VertexDictionary dictionary_from_json(const nlohmann::json &j);
void save_vertices(const VertexDictionary &dict, const std::string &path);
VertexDictionary load_vertices(const std::string &path);

/// FNV-1a 64.
std::uint64_t fnv1a64(const std::string &bytes);
std::string hex64(std::uint64_t v);

}  // namespace qhvm

#endif
