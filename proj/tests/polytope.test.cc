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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "test_util.h"

using namespace qhvm;

namespace {

ExactOp cube_vertex(int sx, int sy, int sz) {
    ExactOp op(1);
    op.set(PauliIndex::from_string("I"), Rational(1, 2));
    op.set(PauliIndex::from_string("X"), Rational(sx ? -1 : 1, 2));
    op.set(PauliIndex::from_string("Y"), Rational(sy ? -1 : 1, 2));
    op.set(PauliIndex::from_string("Z"), Rational(sz ? -1 : 1, 2));
    return op;
}

std::string temp_path(const std::string &name) {
    return ::testing::TempDir() + name;
}

}  // namespace

TEST(lambda_polytope, halfspace_shape) {
    HalfspaceSystem h1 = build_halfspaces(1);
    EXPECT_EQ(h1.rows().size(), 6u);
    EXPECT_EQ(h1.dimension(), 3u);
    EXPECT_EQ(h1.offset(), Rational(1, 2));
    HalfspaceSystem h2 = build_halfspaces(2);
    EXPECT_EQ(h2.rows().size(), 60u);
    EXPECT_EQ(h2.dimension(), 15u);
    EXPECT_EQ(h2.offset(), Rational(1, 4));
    for (const auto &row : h2.rows()) {
        for (int w : row.normal) {
            EXPECT_TRUE(w == 0 || w == 1 || w == -1);
        }
    }
}

TEST(lambda_polytope, rows_evaluate_to_stabilizer_overlap) {
    std::mt19937_64 rng(5);
    HalfspaceSystem h = build_halfspaces(2);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd rho = qhvm::testing::random_density_matrix(2, rng);
        RealOp op = from_dense(rho);
        for (std::size_t r = 0; r < h.rows().size(); ++r) {
            Eigen::MatrixXcd sigma = to_dense(h.catalog()[h.rows()[r].state_id].projector());
            EXPECT_NEAR(h.evaluate(r, op), (sigma * rho).trace().real(), 1e-12);
        }
    }
}

TEST(lambda_polytope, membership_examples) {
    HalfspaceSystem h = build_halfspaces(1);
    EXPECT_EQ(membership(ExactOp::maximally_mixed(1), h).region, Region::Inside);

    MembershipVerdict corner = membership(cube_vertex(0, 0, 0), h);
    EXPECT_EQ(corner.region, Region::Boundary);
    EXPECT_EQ(corner.active.size(), 3u);
    for (std::size_t r : corner.active) {
        // Negative-axis eigenstates: each has one basis row with lambda = 1.
        EXPECT_EQ(h.catalog()[h.rows()[r].state_id].basis_values()[0], 1);
    }

    ExactOp outside(1);
    outside.set(PauliIndex::from_string("I"), Rational(1, 2));
    outside.set(PauliIndex::from_string("X"), Rational(1));
    MembershipVerdict v = membership(outside, h);
    EXPECT_EQ(v.region, Region::Outside);
    ASSERT_EQ(v.violated.size(), 1u);
    const StabilizerState &minus = h.catalog()[h.rows()[v.violated[0]].state_id];
    EXPECT_EQ(minus.projector(), projector(PauliIndex::from_string("X"), 1));
    EXPECT_EQ(h.evaluate(v.violated[0], outside), Rational(-1, 2));

    ExactOp bad_trace = ExactOp::pauli(PauliIndex::identity(1));
    try {
        membership(bad_trace, h);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(lambda_polytope, random_states_are_inside) {
    std::mt19937_64 rng(2024);
    for (std::size_t n = 1; n <= 2; ++n) {
        HalfspaceSystem h = build_halfspaces(n);
        for (int trial = 0; trial < 200; ++trial) {
            RealOp rho = from_dense(trial % 2 ? qhvm::testing::random_pure_state(n, rng)
                                              : qhvm::testing::random_density_matrix(n, rng));
            EXPECT_NE(membership(rho, h).region, Region::Outside);
        }
    }
}

TEST(lambda_polytope, enumerate_n1_is_the_cube) {
    HalfspaceSystem h = build_halfspaces(1);
    VertexDictionary dict = enumerate_vertices(h);
    EXPECT_TRUE(dict.complete);
    ASSERT_EQ(dict.size(), 8u);
    for (int sx = 0; sx < 2; ++sx) {
        for (int sy = 0; sy < 2; ++sy) {
            for (int sz = 0; sz < 2; ++sz) {
                EXPECT_TRUE(dict.index_of(cube_vertex(sx, sy, sz)).has_value());
            }
        }
    }
    for (const auto &v : dict.vertices) {
        EXPECT_EQ(membership(v, h).active.size(), 3u);
        EXPECT_TRUE(certify_vertex(v, h));
    }
    for (auto p : dict.provenance) {
        EXPECT_EQ(p, Provenance::Enumerated);
    }
}

TEST(lambda_polytope, every_facet_is_tight_at_dim_independent_vertices) {
    HalfspaceSystem h = build_halfspaces(1);
    VertexDictionary dict = enumerate_vertices(h);
    for (std::size_t r = 0; r < h.rows().size(); ++r) {
        std::vector<Eigen::Vector3d> tight;
        for (const auto &v : dict.vertices) {
            if (sgn(h.evaluate(r, v)) == 0) {
                tight.push_back({v.expectation(PauliIndex::from_string("X")).get_d(),
                                 v.expectation(PauliIndex::from_string("Y")).get_d(),
                                 v.expectation(PauliIndex::from_string("Z")).get_d()});
            }
        }
        ASSERT_GE(tight.size(), 3u);
        Eigen::MatrixXd diffs(3, tight.size() - 1);
        for (std::size_t k = 1; k < tight.size(); ++k) {
            diffs.col(k - 1) = tight[k] - tight[0];
        }
        // d affinely independent points span a (d-1)-dimensional face.
        EXPECT_EQ(diffs.fullPivLu().rank(), 2);
    }
}

TEST(lambda_polytope, certify_vertex_examples) {
    HalfspaceSystem h = build_halfspaces(1);
    EXPECT_TRUE(certify_vertex(cube_vertex(1, 0, 1), h));
    ExactOp zero = projector(PauliIndex::from_string("Z"), 0);
    EXPECT_EQ(membership(zero, h).active.size(), 1u);
    EXPECT_FALSE(certify_vertex(zero, h));
    EXPECT_FALSE(certify_vertex(ExactOp::maximally_mixed(1), h));
    ExactOp outside(1);
    outside.set(PauliIndex::from_string("I"), Rational(1, 2));
    outside.set(PauliIndex::from_string("Z"), Rational(2));
    try {
        certify_vertex(outside, h);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(lambda_polytope, boundedness_certificates) {
    HalfspaceSystem h1 = build_halfspaces(1);
    BoundednessReport r1 = boundedness_check(h1);
    EXPECT_TRUE(r1.bounded);
    EXPECT_EQ(r1.certificates.size(), 6u);
    for (const auto &cert : r1.certificates) {
        ASSERT_EQ(cert.state_ids.size(), 1u);
        const auto &state = h1.catalog()[cert.state_ids[0]];
        EXPECT_TRUE(state.subspace().contains(cert.direction));
        EXPECT_EQ(state.value(cert.direction), cert.sign);
    }
    BoundednessReport r2 = boundedness_check(build_halfspaces(2));
    EXPECT_TRUE(r2.bounded);
    EXPECT_EQ(r2.certificates.size(), 30u);
    for (const auto &cert : r2.certificates) {
        EXPECT_EQ(cert.state_ids.size(), 2u);
    }
    EXPECT_TRUE(within_hypercube(enumerate_vertices(h1)));
}

TEST(lambda_polytope, dictionary_file_round_trip) {
    VertexDictionary dict = enumerate_vertices(build_halfspaces(1));
    std::string path = temp_path("cube.json");
    save_vertices(dict, path);
    VertexDictionary back = load_vertices(path);
    EXPECT_EQ(back.size(), 8u);
    EXPECT_EQ(back.vertices, dict.vertices);
    EXPECT_EQ(back.provenance, dict.provenance);
    EXPECT_TRUE(back.complete);
    EXPECT_EQ(back.hash(), dict.hash());
    std::remove(path.c_str());
}

TEST(lambda_polytope, dictionary_load_rejects_bad_files) {
    VertexDictionary dict = enumerate_vertices(build_halfspaces(1));
    nlohmann::json j = dictionary_to_json(dict);
    nlohmann::json bad = j;
    bad["vertices"][7]["terms"] = op_to_json([] {
        ExactOp op(1);
        op.set(PauliIndex::from_string("I"), Rational(1, 2));
        op.set(PauliIndex::from_string("Z"), Rational(2));
        return op;
    }())["terms"];
    try {
        dictionary_from_json(bad);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Format);
        EXPECT_NE(std::string(e.what()).find("violated rows"), std::string::npos);
    }
    nlohmann::json other = j;
    other["convention"] = "phase-free";
    try {
        dictionary_from_json(other);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConventionMismatch);
    }
    nlohmann::json miscounted = j;
    miscounted["count"] = 9;
    EXPECT_THROW(dictionary_from_json(miscounted), Error);
}

TEST(lambda_polytope, budget_exhaustion_reports_partial_result) {
    HalfspaceSystem h = build_halfspaces(2);
    EnumerationBudget budget;
    budget.max_seconds = 0.0;
    try {
        enumerate_vertices(h, budget);
        FAIL();
    } catch (const PartialEnumeration &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Budget);
        EXPECT_FALSE(e.partial().complete);
        EXPECT_GT(e.partial().size(), 0u);
    }
    EXPECT_THROW(enumerate_vertices(build_halfspaces(3)), Error);
}
