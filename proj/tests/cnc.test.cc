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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qhvm/stabilizer.h"

using namespace qhvm;

namespace {

std::vector<PauliIndex> parse_all(const std::vector<std::string> &names) {
    std::vector<PauliIndex> out;
    for (const auto &s : names) {
        out.push_back(PauliIndex::from_string(s));
    }
    return out;
}

std::vector<PauliIndex> everything(std::size_t n) {
    std::vector<PauliIndex> out;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << (2 * n)); ++k) {
        out.push_back(PauliIndex::from_packed(n, k));
    }
    return out;
}

// Tries every sign pattern; only usable for small sets.
std::size_t count_assignments_brute_force(const std::vector<PauliIndex> &omega) {
    std::vector<PauliIndex> nonzero;
    for (const auto &a : omega) {
        if (!a.is_identity()) {
            nonzero.push_back(a);
        }
    }
    std::size_t count = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << nonzero.size()); ++bits) {
        std::map<std::uint64_t, int> g;
        g[0] = 0;
        for (std::size_t i = 0; i < nonzero.size(); ++i) {
            g[nonzero[i].packed()] = (bits >> i) & 1;
        }
        bool ok = true;
        for (const auto &a : omega) {
            for (const auto &b : omega) {
                if (symplectic_form(a, b) != 0) {
                    continue;
                }
                int beta = product_phase(a, b);
                if (((g[a.packed()] + g[b.packed()] + g[(a + b).packed()]) & 1) != ((beta / 2) & 1)) {
                    ok = false;
                }
            }
        }
        count += ok;
    }
    return count;
}

}  // namespace

TEST(cnc_operators, closure_examples) {
    auto c = inference_closure(2, parse_all({"ZI", "IZ"}));
    EXPECT_EQ(c, inference_closure(2, parse_all({"II", "ZI", "IZ", "ZZ"})));
    EXPECT_EQ(c.size(), 4u);
    auto d = inference_closure(1, parse_all({"X", "Z"}));
    EXPECT_EQ(d, parse_all({"I", "X", "Z"}));
    EXPECT_EQ(inference_closure(2, c), c);
    EXPECT_TRUE(is_closed_under_inference(c));
    EXPECT_FALSE(is_closed_under_inference(parse_all({"II", "XX", "ZZ"})));
}

TEST(cnc_operators, noncontextuality_examples) {
    auto e1 = everything(1);
    NoncontextualityResult r1 = is_noncontextual(e1);
    EXPECT_TRUE(r1.noncontextual);
    EXPECT_EQ(value_assignments(e1).size(), 8u);

    auto e2 = everything(2);
    NoncontextualityResult r2 = is_noncontextual(e2);
    EXPECT_FALSE(r2.noncontextual);
    ASSERT_FALSE(r2.refutation.empty());
    // The listed constraints must sum to 0 = 1: every variable appears an
    // even number of times while the right-hand sides add to 1.
    std::map<std::uint64_t, int> parity;
    int rhs = 0;
    for (const auto &[a, b] : r2.refutation) {
        EXPECT_EQ(symplectic_form(a, b), 0);
        parity[a.packed()] ^= 1;
        parity[b.packed()] ^= 1;
        parity[(a + b).packed()] ^= 1;
        rhs ^= (product_phase(a, b) / 2) & 1;
    }
    for (const auto &[key, p] : parity) {
        EXPECT_EQ(p, 0) << key;
    }
    EXPECT_EQ(rhs, 1);

    try {
        is_noncontextual(parse_all({"II", "XX", "ZZ"}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(cnc_operators, stabilizer_values_are_assignments) {
    for (const auto &state : enumerate_stabilizer_states(2)) {
        auto elems = state.subspace().elements();
        ASSERT_TRUE(is_noncontextual(elems).noncontextual);
        ValueAssignment lambda;
        for (const auto &a : elems) {
            lambda[a.packed()] = state.value(a);
        }
        EXPECT_TRUE(is_consistent(elems, lambda));
        auto all = value_assignments(elems);
        EXPECT_EQ(all.size(), 4u);
        EXPECT_NE(std::find(all.begin(), all.end(), lambda), all.end());
    }
}

TEST(cnc_operators, solver_matches_brute_force_on_random_closed_sets) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::uint64_t> key(1, 15);
    int closed_contextual = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<PauliIndex> seed;
        int k = 1 + trial % 5;
        for (int i = 0; i < k; ++i) {
            seed.push_back(PauliIndex::from_packed(2, key(rng)));
        }
        auto omega = inference_closure(2, seed);
        std::size_t brute = count_assignments_brute_force(omega);
        EXPECT_EQ(value_assignments(omega).size(), brute);
        EXPECT_EQ(is_noncontextual(omega).noncontextual, brute > 0);
        closed_contextual += brute == 0;
    }
    EXPECT_GT(closed_contextual, 0);
}

TEST(cnc_operators, maximal_sets_n1) {
    auto sets = find_maximal_cnc(1);
    ASSERT_EQ(sets.size(), 1u);
    EXPECT_EQ(sets[0].elements, everything(1));
    EXPECT_TRUE(sets[0].maximal);
}

TEST(cnc_operators, maximal_sets_n2) {
    auto sets = find_maximal_cnc(2);
    ASSERT_FALSE(sets.empty());
    std::set<std::vector<PauliIndex>> seen;
    for (const auto &omega : sets) {
        EXPECT_TRUE(seen.insert(omega.elements).second);
        EXPECT_TRUE(is_closed_under_inference(omega.elements));
        EXPECT_TRUE(is_noncontextual(omega.elements).noncontextual);
        for (const auto &b : everything(2)) {
            if (omega.contains(b)) {
                continue;
            }
            auto grown = omega.elements;
            grown.push_back(b);
            EXPECT_FALSE(is_noncontextual(inference_closure(2, grown)).noncontextual);
        }
    }
    for (const auto &iso : enumerate_maximal_isotropics(2)) {
        bool covered = false;
        for (const auto &omega : sets) {
            bool all = true;
            for (const auto &a : iso.elements()) {
                all = all && omega.contains(a);
            }
            covered = covered || all;
        }
        EXPECT_TRUE(covered);
    }
    // Five pairwise anticommuting Paulis plus the identity is closed,
    // noncontextual and maximal, yet holds no maximal isotropic subspace.
    auto star = parse_all({"II", "XI", "YI", "ZX", "ZY", "ZZ"});
    std::sort(star.begin(), star.end());
    bool found = false;
    for (const auto &omega : sets) {
        found = found || omega.elements == star;
    }
    EXPECT_TRUE(found);
    EXPECT_THROW(find_maximal_cnc(3), Error);
}

TEST(cnc_operators, phase_point_operators_n1_are_the_cube) {
    auto sets = find_maximal_cnc(1);
    ExactOp a000 = phase_point_operator(sets[0], {});
    ExactOp expected(1);
    for (const char *s : {"I", "X", "Y", "Z"}) {
        expected.set(PauliIndex::from_string(s), Rational(1, 2));
    }
    EXPECT_EQ(a000, expected);

    VertexDictionary cube = enumerate_vertices(build_halfspaces(1));
    VertexDictionary cnc = cnc_dictionary(1);
    EXPECT_EQ(cnc.vertices, cube.vertices);
    EXPECT_FALSE(cnc.complete);
}

TEST(cnc_operators, coefficient_readout) {
    for (const auto &omega : find_maximal_cnc(2)) {
        for (const auto &gamma : value_assignments(omega.elements)) {
            ExactOp op = phase_point_operator(omega, gamma);
            EXPECT_EQ(op.trace(), Rational(1));
            for (const auto &a : everything(2)) {
                Rational expected = omega.contains(a) ? Rational(gamma.at(a.packed()) ? -1 : 1) : Rational(0);
                EXPECT_EQ(op.expectation(a), expected);
            }
        }
        break;
    }
}

TEST(cnc_operators, inconsistent_gamma_rejected) {
    auto iso = inference_closure(2, parse_all({"ZI", "IZ"}));
    CncSet omega{2, iso, false};
    ValueAssignment gamma{{PauliIndex::from_string("ZZ").packed(), 1}};
    EXPECT_FALSE(is_consistent(iso, gamma));
    EXPECT_THROW(phase_point_operator(omega, gamma), Error);
}

TEST(cnc_operators, n2_operators_are_vertices) {
    HalfspaceSystem h = build_halfspaces(2);
    VertexDictionary dict = cnc_dictionary(2);
    ASSERT_GE(dict.size(), 100u);
    std::size_t step = dict.size() / 150 + 1;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < dict.size(); i += step) {
        EXPECT_NE(membership(dict.vertices[i], h).region, Region::Outside);
        EXPECT_EQ(active_rank(dict.vertices[i], h), 15u);
        EXPECT_TRUE(certify_vertex(dict.vertices[i], h));
        ++checked;
    }
    EXPECT_GE(checked, 100u);
}

TEST(cnc_operators, catalog_export) {
    auto sets = find_maximal_cnc(1);
    nlohmann::json j = cnc_catalog_json(sets);
    EXPECT_EQ(j["n"], 1);
    ASSERT_EQ(j["sets"].size(), 1u);
    EXPECT_EQ(j["sets"][0]["order"].size(), 3u);
    EXPECT_EQ(j["sets"][0]["assignments"].size(), 8u);
    EXPECT_EQ(j["sets"][0]["assignments"][0], "000");
}
