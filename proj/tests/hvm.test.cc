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

#include "qhvm/hvm.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <thread>

#include "qhvm/cnc.h"
#include "qhvm/oracle.h"
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

std::shared_ptr<const VertexDictionary> cube() {
    static auto dict = std::make_shared<const VertexDictionary>(enumerate_vertices(build_halfspaces(1)));
    return dict;
}

PauliIndex P(const char *s) {
    return PauliIndex::from_string(s);
}

}  // namespace

TEST(hvm_decompose, vertex_self_representation) {
    auto dict = cube();
    for (std::size_t i = 0; i < dict->size(); ++i) {
        ProbVector p = decompose_state(dict->vertices[i], *dict);
        EXPECT_EQ(reconstruct_exact(p, *dict), dict->vertices[i]);
        ProbVector d = ProbVector::delta(*dict, i);
        EXPECT_EQ(reconstruct_exact(d, *dict), dict->vertices[i]);
    }
}

TEST(hvm_decompose, maximally_mixed_is_not_unique) {
    auto dict = cube();
    ProbVector p = decompose_state(ExactOp::maximally_mixed(1), *dict);
    EXPECT_EQ(reconstruct_exact(p, *dict), ExactOp::maximally_mixed(1));
    ProbVector uniform;
    uniform.dictionary_hash = dict->hash();
    uniform.weights.assign(8, 0.125);
    uniform.exact = std::vector<Rational>(8, Rational(1, 8));
    EXPECT_EQ(reconstruct_exact(uniform, *dict), ExactOp::maximally_mixed(1));
    ProbVector antipodal = ProbVector::delta(*dict, *dict->index_of(cube_vertex(0, 0, 0)));
    (*antipodal.exact)[*dict->index_of(cube_vertex(0, 0, 0))] = Rational(1, 2);
    (*antipodal.exact)[*dict->index_of(cube_vertex(1, 1, 1))] = Rational(1, 2);
    EXPECT_EQ(reconstruct_exact(antipodal, *dict), ExactOp::maximally_mixed(1));
    EXPECT_NE(*uniform.exact, *antipodal.exact);
}

TEST(hvm_decompose, t_state_and_random_states) {
    auto dict = cube();
    RealOp t = from_dense(qhvm::testing::t_state_from_ket());
    ProbVector p = decompose_state(t, *dict);
    EXPECT_LT(p.residual, 1e-9);
    EXPECT_LT(reconstruct(p, *dict).max_abs_difference(t), 1e-9);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        RealOp rho = from_dense(qhvm::testing::random_density_matrix(1, rng));
        ProbVector q = decompose_state(rho, *dict);
        double total = 0;
        for (double w : q.weights) {
            EXPECT_GE(w, 0.0);
            total += w;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_LT(reconstruct(q, *dict).max_abs_difference(rho), 1e-9);
    }
}

TEST(hvm_decompose, infeasibility_reports_certificate) {
    VertexDictionary small;
    small.n = 1;
    small.vertices = {cube_vertex(0, 0, 0), cube_vertex(1, 1, 0)};
    small.provenance = {Provenance::Loaded, Provenance::Loaded};
    small.canonicalize();
    ExactOp target = projector(P("Z"), 1);
    try {
        decompose_state(target, small);
        FAIL();
    } catch (const InfeasibleDecomposition &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
        const auto &y = e.certificate();
        ASSERT_EQ(y.size(), 4u);
        auto dot = [&](const ExactOp &op) {
            double s = 0;
            auto c = op.dense_coefficients();
            for (std::size_t k = 0; k < 4; ++k) {
                s += y[k] * c[k].get_d();
            }
            return s;
        };
        for (const auto &v : small.vertices) {
            EXPECT_LE(dot(v), 1e-12);
        }
        EXPECT_GT(dot(target), 0.0);
    }
    ExactOp outside(1);
    outside.set(P("I"), Rational(1, 2));
    outside.set(P("X"), Rational(1));
    EXPECT_THROW(decompose_state(outside, *cube()), InfeasibleDecomposition);
    ExactOp traceless(1);
    traceless.set(P("X"), Rational(1));
    try {
        decompose_state(traceless, *cube());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(hvm_decompose, cube_kernels_have_half_destinations) {
    auto dict = cube();
    for (std::size_t alpha = 0; alpha < 8; ++alpha) {
        for (const char *axis : {"X", "Y", "Z"}) {
            TransitionKernel k = solve_kernel(alpha, P(axis), *dict);
            EXPECT_NO_THROW(validate_kernel(k, *dict));
            int det = sgn(dict->vertices[alpha].coefficient(P(axis))) > 0 ? 0 : 1;
            EXPECT_EQ(k.exact_marginal(det), Rational(1));
            EXPECT_EQ(k.exact_marginal(1 - det), Rational(0));
            ASSERT_EQ(k.entries.size(), 2u);
            for (const auto &e : k.entries) {
                EXPECT_EQ(e.weight, Rational(1, 2));
                EXPECT_EQ(e.outcome, det);
                EXPECT_EQ(dict->vertices[e.beta].coefficient(P(axis)), dict->vertices[alpha].coefficient(P(axis)));
            }
        }
    }
}

TEST(hvm_decompose, z_kernel_pattern) {
    auto dict = cube();
    std::size_t a000 = *dict->index_of(cube_vertex(0, 0, 0));
    TransitionKernel k = solve_kernel(a000, P("Z"), *dict);
    ASSERT_EQ(k.entries.size(), 2u);
    EXPECT_EQ(k.entries[0].outcome, 0);
    std::set<std::size_t> dest{k.entries[0].beta, k.entries[1].beta};
    EXPECT_EQ(dest, (std::set<std::size_t>{a000, *dict->index_of(cube_vertex(1, 1, 0))}));
    // Every Z kernel keeps its source and flips x and y.
    for (std::size_t alpha = 0; alpha < 8; ++alpha) {
        TransitionKernel kz = solve_kernel(alpha, P("Z"), *dict);
        ExactOp flipped = dict->vertices[alpha];
        flipped.set(P("X"), -flipped.coefficient(P("X")));
        flipped.set(P("Y"), -flipped.coefficient(P("Y")));
        std::set<std::size_t> got{kz.entries[0].beta, kz.entries[1].beta};
        EXPECT_EQ(got, (std::set<std::size_t>{alpha, *dict->index_of(flipped)}));
    }
}

TEST(hvm_decompose, outcome_marginals) {
    auto dict = cube();
    KernelCache cache(dict);
    std::size_t a000 = *dict->index_of(cube_vertex(0, 0, 0));
    EXPECT_EQ(outcome_marginal(cache.get(a000, P("Z")), 0), 1.0);
    EXPECT_EQ(outcome_marginal(cache.get(a000, P("Z")), 1), 0.0);

    auto cnc = std::make_shared<const VertexDictionary>(cnc_dictionary(2));
    // A vertex with Tr(T_a A) = 0 splits evenly.
    const ExactOp &v = cnc->vertices[0];
    PauliIndex missing;
    for (std::uint64_t key = 1; key < 16; ++key) {
        if (sgn(v.coefficient(PauliIndex::from_packed(2, key))) == 0) {
            missing = PauliIndex::from_packed(2, key);
            break;
        }
    }
    ASSERT_FALSE(missing.is_identity());
    Rational q0 = Rational(1, 2) + v.coefficient(missing) * 2;
    EXPECT_EQ(q0, Rational(1, 2));
    KernelCache cnc_cache(cnc);
    try {
        const TransitionKernel &k = cnc_cache.get(0, missing);
        EXPECT_EQ(k.exact_marginal(0), Rational(1, 2));
        EXPECT_EQ(k.exact_marginal(0) + k.exact_marginal(1), Rational(1));
    } catch (const InfeasibleDecomposition &e) {
        // The cnc dictionary is incomplete; an infeasible kernel is reported, not fatal.
        EXPECT_NE(std::string(e.what()).find("alpha=0"), std::string::npos);
    }
}

TEST(hvm_decompose, born_examples) {
    auto dict = cube();
    KernelCache cache(dict);
    ProbVector zero = decompose_state(projector(P("Z"), 0), *dict);
    EXPECT_EQ(born_probability_hvm_exact(zero, P("Z"), 0, cache), Rational(1));
    ProbVector mixed = decompose_state(ExactOp::maximally_mixed(1), *dict);
    for (const char *axis : {"X", "Y", "Z"}) {
        EXPECT_EQ(born_probability_hvm_exact(mixed, P(axis), 1, cache), Rational(1, 2));
    }
    Eigen::MatrixXcd t = qhvm::testing::t_state_from_ket();
    ProbVector pt = decompose_state(from_dense(t), *dict);
    double hvm = born_probability_hvm(pt, P("X"), 0, cache);
    EXPECT_NEAR(hvm, 0.5 * (1 + 1 / std::sqrt(2.0)), 1e-9);
    EXPECT_NEAR(hvm, born_probability(t, P("X"), 0), 1e-9);
}

TEST(hvm_decompose, born_rule_random_states) {
    auto dict = cube();
    KernelCache cache(dict);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXcd rho = qhvm::testing::random_density_matrix(1, rng);
        ProbVector p = decompose_state(from_dense(rho), *dict);
        for (const char *axis : {"X", "Y", "Z"}) {
            for (int s = 0; s < 2; ++s) {
                EXPECT_NEAR(born_probability_hvm(p, P(axis), s, cache), born_probability(rho, P(axis), s), 1e-9);
            }
        }
    }
    EXPECT_EQ(cache.size(), 24u);
}

TEST(hvm_decompose, cache_round_trip_and_rejection) {
    auto dict = cube();
    KernelCache cache(dict);
    for (std::size_t alpha = 0; alpha < 8; ++alpha) {
        cache.get(alpha, P("Y"));
    }
    std::string path = ::testing::TempDir() + "kernels.json";
    cache.save(path);
    KernelCache back(dict);
    back.load(path);
    EXPECT_EQ(back.size(), 8u);
    EXPECT_EQ(back.to_json(), cache.to_json());
    std::remove(path.c_str());

    nlohmann::json tampered = cache.to_json();
    tampered["records"][0]["entries"][0][1] = "1";
    tampered["records"][0]["entries"][0][2] = "3";
    KernelCache fresh(dict);
    EXPECT_THROW(fresh.load_json(tampered), Error);
    nlohmann::json stale = cache.to_json();
    stale["dictionary_hash"] = "0000000000000000";
    EXPECT_THROW(fresh.load_json(stale), Error);
    nlohmann::json other = cache.to_json();
    other["convention"] = "other";
    try {
        fresh.load_json(other);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConventionMismatch);
    }
}

TEST(hvm_decompose, cache_concurrent_reads) {
    auto dict = cube();
    KernelCache cache(dict);
    std::vector<std::thread> workers;
    std::vector<Rational> seen(8);
    for (std::size_t w = 0; w < 8; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t alpha = 0; alpha < 8; ++alpha) {
                cache.get(alpha, P("X"));
            }
            seen[w] = cache.get(w, P("X")).exact_marginal(0);
        });
    }
    for (auto &t : workers) {
        t.join();
    }
    EXPECT_EQ(cache.size(), 8u);
    for (std::size_t w = 0; w < 8; ++w) {
        EXPECT_EQ(seen[w], cache.get(w, P("X")).exact_marginal(0));
    }
}

TEST(hvm_decompose, prob_vector_round_trip) {
    auto dict = cube();
    ProbVector p = decompose_state(projector(P("X"), 1), *dict);
    ProbVector back = prob_vector_from_json(prob_vector_to_json(p), *dict);
    EXPECT_EQ(back.weights, p.weights);
    EXPECT_EQ(*back.exact, *p.exact);
    VertexDictionary other = *dict;
    other.vertices.pop_back();
    other.provenance.pop_back();
    EXPECT_THROW(prob_vector_from_json(prob_vector_to_json(p), other), Error);
}

TEST(hvm_decompose, two_qubit_stabilizer_states_over_cnc) {
    VertexDictionary dict = cnc_dictionary(2);
    for (const auto &state : enumerate_stabilizer_states(2)) {
        ProbVector p = decompose_state(state.projector(), dict);
        EXPECT_EQ(reconstruct_exact(p, dict), state.projector());
    }
}
