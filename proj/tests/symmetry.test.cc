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


#include "qhvm/symmetry.h"

#include <gtest/gtest.h>

#include <set>

#include "qhvm/cnc.h"
#include "qhvm/qcm.h"
#include "test_util.h"

using namespace qhvm;
using namespace qhvm::testing;

namespace {

std::shared_ptr<const VertexDictionary> cube() {
    static auto dict = std::make_shared<const VertexDictionary>(enumerate_vertices(build_halfspaces(1)));
    return dict;
}

ExactOp bloch(int x, int y, int z) {
    ExactOp op = ExactOp::maximally_mixed(1);
    op.set(PauliIndex::from_string("X"), Rational(x, 2));
    op.set(PauliIndex::from_string("Y"), Rational(y, 2));
    op.set(PauliIndex::from_string("Z"), Rational(z, 2));
    return op;
}

Eigen::MatrixXcd textbook_h() {
    Eigen::MatrixXcd h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

}  // namespace

TEST(clifford_symmetry, hadamard_on_vertex) {
    auto h = CliffordElement::hadamard(1, 0);
    EXPECT_EQ(act_on_operator(h, bloch(1, 1, 1)), bloch(1, -1, 1));
    Eigen::MatrixXcd m = textbook_h() * to_dense(to_real(bloch(1, 1, 1))) * textbook_h().adjoint();
    EXPECT_LT((m - to_dense(to_real(bloch(1, -1, 1)))).norm(), 1e-12);
    for (const auto &g : enumerate_clifford(1)) {
        EXPECT_EQ(act_on_operator(g, ExactOp::maximally_mixed(1)), ExactOp::maximally_mixed(1));
    }
}

TEST(clifford_symmetry, membership_preserved) {
    std::mt19937_64 rng(3);
    auto sys = build_halfspaces(1);
    auto group = enumerate_clifford(1);
    for (int k = 0; k < 200; ++k) {
        Eigen::MatrixXcd rho = random_density_matrix(1, rng);
        RealOp op = from_dense(rho);
        const auto &g = group[rng() % group.size()];
        EXPECT_NE(membership(g.act(op), sys).region, Region::Outside);
    }
}

TEST(clifford_symmetry, hadamard_orbit_matches_dense) {
    auto dict = cube();
    auto pi = vertex_orbit(CliffordElement::hadamard(1, 0), *dict);
    ASSERT_TRUE(pi.complete());
    for (std::size_t a = 0; a < dict->size(); ++a) {
        Eigen::MatrixXcd m = textbook_h() * to_dense(to_real(dict->vertices[a])) * textbook_h().adjoint();
        EXPECT_LT((m - to_dense(to_real(dict->vertices[pi(a)]))).norm(), 1e-12);
        // H fixes the y sign up to a flip, so it pairs y-flipped vertices
        // or fixes the x = z diagonal.
        EXPECT_EQ(pi(pi(a)), a);
    }
    auto id = vertex_orbit(CliffordElement::identity(1), *dict);
    for (std::size_t a = 0; a < dict->size(); ++a) {
        EXPECT_EQ(id(a), a);
    }
}

TEST(clifford_symmetry, orbit_is_transitive_group_action) {
    auto dict = cube();
    auto group = enumerate_clifford(1);
    std::vector<VertexPermutation> orbits;
    std::set<std::size_t> reached;
    for (const auto &g : group) {
        orbits.push_back(vertex_orbit(g, *dict));
        reached.insert(orbits.back()(0));
        std::set<std::size_t> image;
        for (std::size_t a = 0; a < dict->size(); ++a) {
            image.insert(orbits.back()(a));
        }
        EXPECT_EQ(image.size(), dict->size());
    }
    EXPECT_EQ(reached.size(), 8u);
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (std::size_t j = 0; j < group.size(); ++j) {
            ASSERT_TRUE(is_group_action(orbits[i], orbits[j], vertex_orbit(group[i].compose(group[j]), *dict)));
        }
    }
    auto table = orbit_table_json(orbits);
    EXPECT_EQ(table.size(), 24u);
    EXPECT_EQ(table[0]["permutation"].size(), 8u);
}

TEST(clifford_symmetry, covariance) {
    auto dict = cube();
    RealOp t = magic_state(1).op;
    std::mt19937_64 rng(8);
    for (const auto &g : enumerate_clifford(1)) {
        auto c = check_covariance(g, t, *dict);
        EXPECT_TRUE(c.ok);
        EXPECT_LT(c.residual, 1e-9);
        RealOp r = from_dense(random_density_matrix(1, rng));
        EXPECT_TRUE(check_covariance(g, r, *dict).ok);
        // A delta distribution moves to the image vertex.
        auto pi = vertex_orbit(g, *dict);
        for (std::size_t a = 0; a < dict->size(); ++a) {
            EXPECT_EQ(g.act(dict->vertices[a]), dict->vertices[pi(a)]);
        }
    }
}

TEST(clifford_symmetry, dual_function) {
    auto dict = cube();
    KernelCache cache(dict);
    auto zero = *dict->index_of(bloch(1, 1, 1));
    auto z = PauliIndex::from_string("Z");
    EXPECT_DOUBLE_EQ(dual_of_projector(z, 0, cache).values[zero], 1.0);
    EXPECT_DOUBLE_EQ(dual_function(to_real(projector(z, 0)), cache).values[zero], 1.0);
    RealOp identity(1);
    identity.set(PauliIndex::identity(1), 1.0);
    auto id = dual_function(identity, cache);
    for (double v : id.values) {
        EXPECT_DOUBLE_EQ(v, 1.0);
    }
}

TEST(clifford_symmetry, sw_report) {
    auto dict = cube();
    KernelCache cache(dict);
    auto report = sw_checks(*dict, cache);
    EXPECT_TRUE(report.passed());
    EXPECT_EQ(report.at("linearity").status, "FAILED-BY-DESIGN");
    for (const char *name : {"reality", "standardization", "covariance", "traciality"}) {
        EXPECT_EQ(report.at(name).status, "PASS") << name << ": " << report.at(name).detail;
        EXPECT_LT(report.at(name).residual, 1e-9) << name;
    }
    EXPECT_EQ(report.to_json()["criteria"].size(), 5u);
}

TEST(clifford_symmetry, partial_orbits_on_incomplete_dictionary) {
    auto dict = cnc_dictionary(1);
    ASSERT_FALSE(dict.complete);
    auto pi = vertex_orbit(CliffordElement::hadamard(1, 0), dict);
    EXPECT_EQ(pi.image.size(), dict.size());
    KernelCache cache(std::make_shared<const VertexDictionary>(dict));
    EXPECT_THROW(sw_checks(dict, cache), Error);
}
