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

#include "qhvm/polytope.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace qhvm {

HalfspaceSystem::HalfspaceSystem(std::size_t n)
    : n_(n), offset_(dyadic(1, static_cast<unsigned>(n))), catalog_(std::make_shared<StabilizerCatalog>(n)) {
    std::size_t dim = dimension();
    rows_.reserve(catalog_->size());
    for (std::size_t id = 0; id < catalog_->size(); ++id) {
        const StabilizerState &state = (*catalog_)[id];
        HalfspaceRow row;
        row.state_id = id;
        row.normal.assign(dim, 0);
        for (const PauliIndex &a : state.subspace().elements()) {
            if (!a.is_identity()) {
                row.normal[a.packed() - 1] = state.expectation(a);
            }
        }
        rows_.push_back(std::move(row));
    }
}

HalfspaceSystem build_halfspaces(std::size_t n) {
    return HalfspaceSystem(n);
}

const char *region_name(Region region) {
    switch (region) {
        case Region::Inside:
            return "inside";
        case Region::Boundary:
            return "boundary";
        case Region::Outside:
            return "outside";
    }
    return "unknown";
}

const char *provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Enumerated:
            return "enumerated";
        case Provenance::CncGenerated:
            return "cnc-generated";
        case Provenance::Loaded:
            return "loaded";
    }
    return "unknown";
}

Provenance provenance_from_name(const std::string &name) {
    if (name == "enumerated") {
        return Provenance::Enumerated;
    }
    if (name == "cnc-generated") {
        return Provenance::CncGenerated;
    }
    if (name == "loaded") {
        return Provenance::Loaded;
    }
    throw Error(ErrorKind::Format, "unknown vertex provenance '" + name + "'");
}

bool coefficient_less(const ExactOp &a, const ExactOp &b) {
    auto da = a.dense_coefficients();
    auto db = b.dense_coefficients();
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
}

void VertexDictionary::canonicalize() {
    std::vector<std::size_t> order(vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::vector<std::vector<Rational>> keys;
    keys.reserve(vertices.size());
    for (const auto &v : vertices) {
        keys.push_back(v.dense_coefficients());
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<ExactOp> sorted;
    std::vector<Provenance> sorted_provenance;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && keys[order[k]] == keys[order[k - 1]]) {
            continue;
        }
        sorted.push_back(std::move(vertices[order[k]]));
        sorted_provenance.push_back(provenance.empty() ? Provenance::Loaded : provenance[order[k]]);
    }
    vertices = std::move(sorted);
    provenance = std::move(sorted_provenance);
}

std::optional<std::size_t> VertexDictionary::index_of(const ExactOp &op) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), op, coefficient_less);
    if (it != vertices.end() && *it == op) {
        return static_cast<std::size_t>(it - vertices.begin());
    }
    // Fall back to a scan for dictionaries that were never canonicalized.
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] == op) {
            return i;
        }
    }
    return std::nullopt;
}

std::uint64_t fnv1a64(const std::string &bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char *digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::uint64_t VertexDictionary::hash() const {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &v : vertices) {
        ops.push_back(op_to_json(v).at("terms"));
    }
    nlohmann::json j = {{"n", n}, {"convention", kPhaseConventionId}, {"vertices", ops}};
    return fnv1a64(j.dump());
}

std::string VertexDictionary::hash_hex() const {
    return hex64(hash());
}

namespace {

struct DdVertex {
    std::vector<Rational> u;
    std::vector<std::uint64_t> zeros;
};

void set_bit(std::vector<std::uint64_t> &words, std::size_t i) {
    words[i / 64] |= std::uint64_t{1} << (i % 64);
}

std::size_t popcount(const std::vector<std::uint64_t> &words) {
    std::size_t c = 0;
    for (auto w : words) {
        c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
}

bool contains_all(const std::vector<std::uint64_t> &super, const std::vector<std::uint64_t> &sub) {
    for (std::size_t i = 0; i < super.size(); ++i) {
        if ((super[i] & sub[i]) != sub[i]) {
            return false;
        }
    }
    return true;
}

VertexDictionary to_dictionary(std::size_t n, const std::vector<DdVertex> &vertices, bool complete) {
    VertexDictionary dict;
    dict.n = n;
    dict.complete = complete;
    Rational scale = dyadic(1, static_cast<unsigned>(n));
    for (const auto &v : vertices) {
        ExactOp op(n);
        op.set(PauliIndex::identity(n), scale);
        for (std::size_t j = 0; j < v.u.size(); ++j) {
            op.set(PauliIndex::from_packed(n, j + 1), Rational(v.u[j] * scale));
        }
        dict.vertices.push_back(std::move(op));
        dict.provenance.push_back(Provenance::Enumerated);
    }
    dict.canonicalize();
    return dict;
}

}  // namespace

VertexDictionary enumerate_vertices(const HalfspaceSystem &system, const EnumerationBudget &budget) {
    const std::size_t n = system.num_qubits();
    if (n > 2) {
        throw Error(ErrorKind::Capacity, "enumerate_vertices: supported for n <= 2");
    }
    const std::size_t d = system.dimension();
    const std::size_t total_constraints = 2 * d + system.rows().size();
    const std::size_t words = (total_constraints + 63) / 64;
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    // Hypercube in u_a = Tr(T_a X) coordinates. Constraint 2j is 1 - u_j >= 0
    // and 2j+1 is 1 + u_j >= 0.
    std::vector<DdVertex> current;
    current.reserve(std::size_t{1} << d);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        DdVertex v;
        v.u.resize(d);
        v.zeros.assign(words, 0);
        for (std::size_t j = 0; j < d; ++j) {
            bool negative = (mask >> j) & 1;
            v.u[j] = negative ? -1 : 1;
            set_bit(v.zeros, 2 * j + (negative ? 1 : 0));
        }
        current.push_back(std::move(v));
    }

    for (std::size_t r = 0; r < system.rows().size(); ++r) {
        const auto &normal = system.rows()[r].normal;
        const std::size_t constraint = 2 * d + r;
        std::vector<Rational> values(current.size());
        std::vector<std::size_t> plus, minus;
        for (std::size_t i = 0; i < current.size(); ++i) {
            Rational f = 1;
            for (std::size_t j = 0; j < d; ++j) {
                if (normal[j] > 0) {
                    f += current[i].u[j];
                } else if (normal[j] < 0) {
                    f -= current[i].u[j];
                }
            }
            int sign = sgn(f);
            if (sign > 0) {
                plus.push_back(i);
            } else if (sign < 0) {
                minus.push_back(i);
            } else {
                set_bit(current[i].zeros, constraint);
            }
            values[i] = std::move(f);
        }
        std::vector<DdVertex> next;
        for (std::size_t p : plus) {
            for (std::size_t q : minus) {
                std::vector<std::uint64_t> common(words);
                for (std::size_t w = 0; w < words; ++w) {
                    common[w] = current[p].zeros[w] & current[q].zeros[w];
                }
                if (popcount(common) + 1 < d) {
                    continue;
                }
                bool adjacent = true;
                for (std::size_t o = 0; o < current.size() && adjacent; ++o) {
                    if (o != p && o != q && contains_all(current[o].zeros, common)) {
                        adjacent = false;
                    }
                }
                if (!adjacent) {
                    continue;
                }
                DdVertex v;
                v.u.resize(d);
                Rational denom = values[p] - values[q];
                for (std::size_t j = 0; j < d; ++j) {
                    v.u[j] = (values[p] * current[q].u[j] - values[q] * current[p].u[j]) / denom;
                }
                v.zeros = std::move(common);
                set_bit(v.zeros, constraint);
                next.push_back(std::move(v));
                if (elapsed() > budget.max_seconds) {
                    throw PartialEnumeration("enumerate_vertices: time budget exceeded",
                                             to_dictionary(n, current, false), r);
                }
            }
        }
        std::vector<DdVertex> kept;
        kept.reserve(current.size() - minus.size() + next.size());
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (sgn(values[i]) >= 0) {
                kept.push_back(std::move(current[i]));
            }
        }
        for (auto &v : next) {
            kept.push_back(std::move(v));
        }
        current = std::move(kept);
        if (budget.on_insertion) {
            budget.on_insertion(r + 1, current.size());
        }
        if (current.size() > budget.max_vertices) {
            throw PartialEnumeration("enumerate_vertices: vertex budget exceeded", to_dictionary(n, current, false),
                                     r + 1);
        }
        if (elapsed() > budget.max_seconds) {
            throw PartialEnumeration("enumerate_vertices: time budget exceeded", to_dictionary(n, current, false),
                                     r + 1);
        }
    }
    return to_dictionary(n, current, true);
}

std::size_t active_rank(const ExactOp &op, const HalfspaceSystem &system) {
    MembershipVerdict verdict = membership(op, system);
    if (verdict.region == Region::Outside) {
        throw Error(ErrorKind::Domain, "certify_vertex: operator lies outside the polytope");
    }
    const std::size_t d = system.dimension();
    std::vector<std::vector<Rational>> matrix;
    for (std::size_t r : verdict.active) {
        std::vector<Rational> row(d);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = system.rows()[r].normal[j];
        }
        matrix.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < matrix.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < matrix.size() && sgn(matrix[pivot][col]) == 0) {
            ++pivot;
        }
        if (pivot == matrix.size()) {
            continue;
        }
        std::swap(matrix[rank], matrix[pivot]);
        for (std::size_t i = rank + 1; i < matrix.size(); ++i) {
            if (sgn(matrix[i][col]) == 0) {
                continue;
            }
            Rational factor = matrix[i][col] / matrix[rank][col];
            for (std::size_t j = col; j < d; ++j) {
                matrix[i][j] -= factor * matrix[rank][j];
            }
        }
        ++rank;
    }
    return rank;
}

bool certify_vertex(const ExactOp &op, const HalfspaceSystem &system) {
    return active_rank(op, system) == system.dimension();
}

BoundednessReport boundedness_check(const HalfspaceSystem &system) {
    const std::size_t n = system.num_qubits();
    const StabilizerCatalog &catalog = system.catalog();
    const std::size_t d = system.dimension();
    BoundednessReport report;
    report.bounded = true;
    Rational half(1, 2);
    int block = 1 << (n - 1);
    for (std::uint64_t key = 1; key <= d; ++key) {
        PauliIndex a = PauliIndex::from_packed(n, key);
        // First maximal isotropic subspace (in catalog order) containing a.
        std::optional<IsotropicSubspace> chosen;
        for (const auto &state : catalog.states()) {
            if (state.subspace().contains(a)) {
                chosen = state.subspace();
                break;
            }
        }
        for (int s = 0; s < 2; ++s) {
            BoundednessCertificate cert{a, s, {}};
            Rational offset_sum = 0;
            std::vector<int> normal_sum(d, 0);
            if (chosen) {
                for (std::size_t id = 0; id < catalog.size(); ++id) {
                    const auto &state = catalog[id];
                    if (state.subspace() == *chosen && state.value(a) == s) {
                        cert.state_ids.push_back(id);
                        offset_sum += system.offset();
                        for (std::size_t j = 0; j < d; ++j) {
                            normal_sum[j] += system.rows()[id].normal[j];
                        }
                    }
                }
            }
            // Expect exactly the row of Pi_{a,s}: 1/2 + (-1)^s 2^{n-1} c_a.
            bool ok = chosen.has_value() && offset_sum == half;
            for (std::size_t j = 0; j < d && ok; ++j) {
                int expected = (j + 1 == key) ? (s ? -block : block) : 0;
                ok = normal_sum[j] == expected;
            }
            if (!ok) {
                report.bounded = false;
                report.offending = a;
                return report;
            }
            report.certificates.push_back(std::move(cert));
        }
    }
    return report;
}

bool within_hypercube(const VertexDictionary &dict) {
    for (const auto &v : dict.vertices) {
        for (const auto &[key, c] : v.terms()) {
            if (key == 0) {
                continue;
            }
            Rational e = v.expectation(PauliIndex::from_packed(dict.n, key));
            if (abs(e) > 1) {
                return false;
            }
        }
    }
    return true;
}

nlohmann::json dictionary_to_json(const VertexDictionary &dict) {
    nlohmann::json vertices = nlohmann::json::array();
    for (std::size_t id = 0; id < dict.size(); ++id) {
        Provenance p = dict.provenance.empty() ? Provenance::Loaded : dict.provenance[id];
        vertices.push_back(
            {{"id", id}, {"provenance", provenance_name(p)}, {"terms", op_to_json(dict.vertices[id]).at("terms")}});
    }
    return {{"n", dict.n},
            {"convention", kPhaseConventionId},
            {"complete", dict.complete},
            {"count", dict.size()},
            {"vertices", vertices}};
}

VertexDictionary dictionary_from_json(const nlohmann::json &j) {
    VertexDictionary dict;
    try {
        std::string convention = j.at("convention").get<std::string>();
        if (convention != kPhaseConventionId) {
            throw Error(ErrorKind::ConventionMismatch, "vertex dictionary uses phase convention '" + convention +
                                                           "', expected '" + kPhaseConventionId + "'");
        }
        dict.n = j.at("n").get<std::size_t>();
        dict.complete = j.at("complete").get<bool>();
        std::size_t count = j.at("count").get<std::size_t>();
        HalfspaceSystem system(dict.n);
        for (const auto &record : j.at("vertices")) {
            nlohmann::json op_json = {{"n", dict.n}, {"convention", convention}, {"terms", record.at("terms")}};
            ExactOp op = op_from_json(op_json);
            std::size_t id = record.at("id").get<std::size_t>();
            if (id != dict.vertices.size()) {
                throw Error(ErrorKind::Format, "vertex ids must be consecutive from 0");
            }
            MembershipVerdict verdict = membership(op, system);
            if (verdict.region == Region::Outside) {
                std::ostringstream os;
                os << "vertex " << id << " fails membership; violated rows:";
                for (std::size_t k = 0; k < verdict.violated.size(); ++k) {
                    os << " " << verdict.violated[k] << "(" << verdict.violated_values[k] << ")";
                }
                throw Error(ErrorKind::Format, os.str());
            }
            if (!dict.vertices.empty() && !coefficient_less(dict.vertices.back(), op)) {
                throw Error(ErrorKind::Format, "vertices are not in canonical order or contain duplicates");
            }
            dict.vertices.push_back(std::move(op));
            dict.provenance.push_back(provenance_from_name(record.at("provenance").get<std::string>()));
        }
        if (count != dict.vertices.size()) {
            throw Error(ErrorKind::Format, "vertex count does not match header");
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("malformed vertex dictionary: ") + e.what());
    }
    return dict;
}

void save_vertices(const VertexDictionary &dict, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Format, "cannot write " + path);
    }
    out << dictionary_to_json(dict).dump(1) << "\n";
}

VertexDictionary load_vertices(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Format, "cannot read " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("malformed vertex dictionary: ") + e.what());
    }
    return dictionary_from_json(j);
}

}  // namespace qhvm
