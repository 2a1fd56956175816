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


#include "qhvm/cnc.h"

#include <algorithm>
#include <set>

namespace qhvm {

namespace {

using Words = std::vector<std::uint64_t>;

void xor_into(Words &dst, const Words &src) {
    for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] ^= src[k];
    }
}

bool test_bit(const Words &w, std::size_t i) {
    return (w[i / 64] >> (i % 64)) & 1;
}

void set_bit(Words &w, std::size_t i) {
    w[i / 64] |= std::uint64_t{1} << (i % 64);
}

struct Triple {
    std::size_t a, b, c;
    int rhs;
};

struct System {
    std::vector<PauliIndex> vars;  // non-identity elements in key order
    std::map<std::uint64_t, std::size_t> var_of;
    std::vector<Triple> equations;
};

System build_system(const std::vector<PauliIndex> &omega) {
    if (omega.empty()) {
        throw Error(ErrorKind::Domain, "cnc: empty set");
    }
    std::size_t n = omega[0].n;
    System sys;
    std::set<std::uint64_t> keys;
    for (const auto &a : omega) {
        if (a.n != n) {
            throw Error(ErrorKind::Dimension, "cnc: mixed qubit counts");
        }
        keys.insert(a.packed());
    }
    for (auto key : keys) {
        if (key != 0) {
            sys.var_of[key] = sys.vars.size();
            sys.vars.push_back(PauliIndex::from_packed(n, key));
        }
    }
    for (std::size_t i = 0; i < sys.vars.size(); ++i) {
        for (std::size_t j = i + 1; j < sys.vars.size(); ++j) {
            const PauliIndex &a = sys.vars[i];
            const PauliIndex &b = sys.vars[j];
            if (symplectic_form(a, b) != 0) {
                continue;
            }
            std::uint64_t sum = (a + b).packed();
            if (!keys.count(sum)) {
                throw Error(ErrorKind::Domain, "cnc: set is not closed under inference");
            }
            // Each triple {a, b, a+b} is visited once, from its two smallest members.
            if (sum < b.packed()) {
                continue;
            }
            sys.equations.push_back({i, j, sys.var_of[sum], commuting_product_sign(a, b)});
        }
    }
    return sys;
}

struct Echelon {
    bool consistent = true;
    Words refutation;  // equation combination when inconsistent
    std::vector<Words> rows;
    std::vector<int> rhs;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> free_vars;
};

Echelon eliminate(const System &sys) {
    std::size_t nv = sys.vars.size();
    std::size_t ne = sys.equations.size();
    std::size_t vw = nv / 64 + 1;
    std::size_t ew = ne / 64 + 1;
    std::vector<Words> rows(ne, Words(vw, 0));
    std::vector<Words> combos(ne, Words(ew, 0));
    std::vector<int> rhs(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto &t = sys.equations[e];
        set_bit(rows[e], t.a);
        set_bit(rows[e], t.b);
        set_bit(rows[e], t.c);
        set_bit(combos[e], e);
        rhs[e] = t.rhs;
    }
    Echelon out;
    std::size_t r = 0;
    std::vector<char> is_pivot(nv, 0);
    for (std::size_t v = 0; v < nv && r < ne; ++v) {
        std::size_t p = r;
        while (p < ne && !test_bit(rows[p], v)) {
            ++p;
        }
        if (p == ne) {
            continue;
        }
        std::swap(rows[p], rows[r]);
        std::swap(combos[p], combos[r]);
        std::swap(rhs[p], rhs[r]);
        for (std::size_t q = 0; q < ne; ++q) {
            if (q != r && test_bit(rows[q], v)) {
                xor_into(rows[q], rows[r]);
                xor_into(combos[q], combos[r]);
                rhs[q] ^= rhs[r];
            }
        }
        out.pivots.push_back(v);
        is_pivot[v] = 1;
        ++r;
    }
    for (std::size_t q = r; q < ne; ++q) {
        if (rhs[q]) {
            out.consistent = false;
            out.refutation = combos[q];
            break;
        }
    }
    rows.resize(r);
    rhs.resize(r);
    out.rows = std::move(rows);
    out.rhs = std::move(rhs);
    for (std::size_t v = 0; v < nv; ++v) {
        if (!is_pivot[v]) {
            out.free_vars.push_back(v);
        }
    }
    return out;
}

ValueAssignment solve_with_free(const System &sys, const Echelon &ech, std::uint64_t free_bits) {
    std::vector<int> val(sys.vars.size(), 0);
    for (std::size_t k = 0; k < ech.free_vars.size(); ++k) {
        val[ech.free_vars[k]] = (free_bits >> k) & 1;
    }
    for (std::size_t r = 0; r < ech.rows.size(); ++r) {
        int v = ech.rhs[r];
        for (auto f : ech.free_vars) {
            if (test_bit(ech.rows[r], f)) {
                v ^= val[f];
            }
        }
        val[ech.pivots[r]] = v;
    }
    ValueAssignment gamma;
    gamma[0] = 0;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) {
        gamma[sys.vars[i].packed()] = val[i];
    }
    return gamma;
}

std::vector<PauliIndex> sorted_unique(std::size_t n, const std::set<std::uint64_t> &keys) {
    std::vector<PauliIndex> out;
    for (auto key : keys) {
        out.push_back(PauliIndex::from_packed(n, key));
    }
    return out;
}

int gamma_of(const ValueAssignment &gamma, std::uint64_t key) {
    auto it = gamma.find(key);
    return it == gamma.end() ? 0 : it->second & 1;
}

}  // namespace

bool CncSet::contains(const PauliIndex &a) const {
    return std::binary_search(elements.begin(), elements.end(), a);
}

std::vector<PauliIndex> inference_closure(std::size_t n, const std::vector<PauliIndex> &seed) {
    std::set<std::uint64_t> keys;
    for (const auto &a : seed) {
        if (a.n != n) {
            throw Error(ErrorKind::Dimension, "inference_closure: mixed qubit counts");
        }
        keys.insert(a.packed());
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::uint64_t> cur(keys.begin(), keys.end());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            PauliIndex a = PauliIndex::from_packed(n, cur[i]);
            for (std::size_t j = i; j < cur.size(); ++j) {
                PauliIndex b = PauliIndex::from_packed(n, cur[j]);
                if (symplectic_form(a, b) == 0 && keys.insert((a + b).packed()).second) {
                    grew = true;
                }
            }
        }
    }
    return sorted_unique(n, keys);
}

bool is_closed_under_inference(const std::vector<PauliIndex> &omega) {
    if (omega.empty()) {
        return true;
    }
    return inference_closure(omega[0].n, omega).size() == std::set<PauliIndex>(omega.begin(), omega.end()).size();
}

NoncontextualityResult is_noncontextual(const std::vector<PauliIndex> &omega) {
    System sys = build_system(omega);
    Echelon ech = eliminate(sys);
    NoncontextualityResult out;
    out.noncontextual = ech.consistent;
    if (ech.consistent) {
        out.assignment = solve_with_free(sys, ech, 0);
    } else {
        for (std::size_t e = 0; e < sys.equations.size(); ++e) {
            if (test_bit(ech.refutation, e)) {
                out.refutation.emplace_back(sys.vars[sys.equations[e].a], sys.vars[sys.equations[e].b]);
            }
        }
    }
    return out;
}

std::vector<ValueAssignment> value_assignments(const std::vector<PauliIndex> &omega) {
    System sys = build_system(omega);
    Echelon ech = eliminate(sys);
    if (!ech.consistent) {
        return {};
    }
    if (ech.free_vars.size() > 20) {
        throw Error(ErrorKind::Capacity, "value_assignments: solution space too large to list");
    }
    std::vector<ValueAssignment> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ech.free_vars.size()); ++bits) {
        out.push_back(solve_with_free(sys, ech, bits));
    }
    return out;
}

bool is_consistent(const std::vector<PauliIndex> &omega, const ValueAssignment &gamma) {
    if (gamma_of(gamma, 0) != 0) {
        return false;
    }
    System sys = build_system(omega);
    for (const auto &t : sys.equations) {
        int lhs = gamma_of(gamma, sys.vars[t.a].packed()) ^ gamma_of(gamma, sys.vars[t.b].packed()) ^
                  gamma_of(gamma, sys.vars[t.c].packed());
        if (lhs != t.rhs) {
            return false;
        }
    }
    return true;
}

std::vector<CncSet> find_maximal_cnc(std::size_t n, std::size_t cap) {
    if (n < 1) {
        throw Error(ErrorKind::Domain, "find_maximal_cnc: n must be positive");
    }
    if (n > cap || n > 2) {
        throw Error(ErrorKind::Capacity, "find_maximal_cnc: exhaustive search limited to n <= 2");
    }
    const std::size_t universe = std::size_t{1} << (2 * n);
    std::vector<std::uint32_t> commuting(universe, 0);
    for (std::size_t i = 0; i < universe; ++i) {
        for (std::size_t j = 0; j < universe; ++j) {
            if (symplectic_form(PauliIndex::from_packed(n, i), PauliIndex::from_packed(n, j)) == 0) {
                commuting[i] |= std::uint32_t{1} << j;
            }
        }
    }
    auto close = [&](std::uint32_t mask) {
        for (;;) {
            std::uint32_t next = mask;
            for (std::size_t i = 0; i < universe; ++i) {
                if (!((mask >> i) & 1)) {
                    continue;
                }
                std::uint32_t partners = mask & commuting[i];
                for (std::size_t j = 0; j < universe; ++j) {
                    if ((partners >> j) & 1) {
                        next |= std::uint32_t{1} << (i ^ j);
                    }
                }
            }
            if (next == mask) {
                return mask;
            }
            mask = next;
        }
    };
    auto to_vector = [&](std::uint32_t mask) {
        std::vector<PauliIndex> out;
        for (std::size_t i = 0; i < universe; ++i) {
            if ((mask >> i) & 1) {
                out.push_back(PauliIndex::from_packed(n, i));
            }
        }
        return out;
    };

    // cnc[mask]: 0 unknown/not closed, 1 closed and contextual, 2 cnc.
    const std::uint32_t subsets = std::uint32_t{1} << (universe - 1);
    std::vector<char> cnc(std::size_t{1} << universe, 0);
    std::vector<std::uint32_t> closed_sets;
    for (std::uint32_t sub = 0; sub < subsets; ++sub) {
        std::uint32_t mask = (sub << 1) | 1;
        if (close(mask) != mask) {
            continue;
        }
        cnc[mask] = is_noncontextual(to_vector(mask)).noncontextual ? 2 : 1;
        closed_sets.push_back(mask);
    }
    std::vector<CncSet> out;
    for (auto mask : closed_sets) {
        if (cnc[mask] != 2) {
            continue;
        }
        bool maximal = true;
        for (std::size_t j = 1; j < universe && maximal; ++j) {
            if (!((mask >> j) & 1) && cnc[close(mask | (std::uint32_t{1} << j))] == 2) {
                maximal = false;
            }
        }
        if (maximal) {
            out.push_back(CncSet{n, to_vector(mask), true});
        }
    }
    return out;
}

ExactOp phase_point_operator(const CncSet &omega, const ValueAssignment &gamma) {
    if (!omega.contains(PauliIndex::identity(omega.n))) {
        throw Error(ErrorKind::Domain, "phase_point_operator: set lacks the identity");
    }
    if (!is_consistent(omega.elements, gamma)) {
        throw Error(ErrorKind::Domain, "phase_point_operator: inconsistent value assignment");
    }
    ExactOp out(omega.n);
    Rational c = dyadic(1, static_cast<unsigned>(omega.n));
    for (const auto &a : omega.elements) {
        out.set(a, gamma_of(gamma, a.packed()) ? Rational(-c) : c);
    }
    return out;
}

VertexDictionary cnc_dictionary(std::size_t n, std::size_t cap) {
    VertexDictionary dict;
    dict.n = n;
    for (const auto &omega : find_maximal_cnc(n, cap)) {
        for (const auto &gamma : value_assignments(omega.elements)) {
            dict.vertices.push_back(phase_point_operator(omega, gamma));
            dict.provenance.push_back(Provenance::CncGenerated);
        }
    }
    dict.complete = false;
    dict.canonicalize();
    return dict;
}

nlohmann::json cnc_catalog_json(const std::vector<CncSet> &sets) {
    nlohmann::json j;
    j["n"] = sets.empty() ? 0 : sets[0].n;
    j["convention"] = kPhaseConventionId;
    j["sets"] = nlohmann::json::array();
    for (const auto &omega : sets) {
        nlohmann::json s;
        s["elements"] = nlohmann::json::array();
        s["order"] = nlohmann::json::array();
        for (const auto &a : omega.elements) {
            s["elements"].push_back(a.hex());
            if (!a.is_identity()) {
                s["order"].push_back(a.hex());
            }
        }
        s["maximal"] = omega.maximal;
        s["assignments"] = nlohmann::json::array();
        for (const auto &gamma : value_assignments(omega.elements)) {
            std::string bits;
            for (const auto &a : omega.elements) {
                if (!a.is_identity()) {
                    bits.push_back(gamma_of(gamma, a.packed()) ? '1' : '0');
                }
            }
            s["assignments"].push_back(bits);
        }
        j["sets"].push_back(s);
    }
    return j;
}

}  // namespace qhvm
