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

#include "qhvm/oracle.h"

#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "qhvm/stabilizer.h"
#include "test_util.h"

using namespace qhvm;
using qhvm::testing::textbook_pauli;

namespace {

Eigen::MatrixXcd zero_state() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}

Eigen::MatrixXcd plus_state() {
    return Eigen::MatrixXcd::Constant(2, 2, 0.5);
}

PauliIndex P(const char *s) {
    return PauliIndex::from_string(s);
}

}  // namespace

TEST(qm_oracle, born_examples) {
    EXPECT_DOUBLE_EQ(born_probability(zero_state(), P("Z"), 0), 1.0);
    EXPECT_NEAR(born_probability(qhvm::testing::t_state_from_ket(), P("X"), 0), 0.5 * (1 + 1 / std::sqrt(2.0)),
                1e-12);
    Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    for (std::uint64_t k = 1; k < 16; ++k) {
        EXPECT_NEAR(born_probability(mixed, PauliIndex::from_packed(2, k), 1), 0.5, 1e-15);
    }
    EXPECT_THROW(born_probability(zero_state(), P("I"), 0), Error);
    EXPECT_THROW(born_probability(zero_state(), P("ZZ"), 0), Error);
}

TEST(qm_oracle, post_measurement_examples) {
    EXPECT_LT((post_measurement_state(plus_state(), P("Z"), 0) - zero_state()).cwiseAbs().maxCoeff(), 1e-15);
    try {
        post_measurement_state(zero_state(), P("Z"), 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidState);
    }
    EXPECT_LT((post_measurement_state(qhvm::testing::t_state_from_ket(), P("X"), 0) - plus_state())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
}

TEST(qm_oracle, joint_distribution_examples) {
    Distribution d = joint_distribution(zero_state(), {P("Z"), P("X")});
    EXPECT_NEAR(d["00"], 0.5, 1e-15);
    EXPECT_NEAR(d["01"], 0.5, 1e-15);
    EXPECT_NEAR(d["10"], 0.0, 1e-15);
    EXPECT_NEAR(d["11"], 0.0, 1e-15);
    Distribution empty = joint_distribution(zero_state(), {});
    ASSERT_EQ(empty.size(), 1u);
    EXPECT_DOUBLE_EQ(empty[""], 1.0);
    Eigen::MatrixXcd bell = 0.25 * (textbook_pauli("II") + textbook_pauli("XX") - textbook_pauli("YY") +
                                    textbook_pauli("ZZ"));
    Distribution b = joint_distribution(bell, {P("ZI"), P("IZ")});
    EXPECT_NEAR(b["00"], 0.5, 1e-15);
    EXPECT_NEAR(b["11"], 0.5, 1e-15);
    EXPECT_NEAR(b["01"] + b["10"], 0.0, 1e-15);
}

TEST(qm_oracle, internal_consistency) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd rho = qhvm::testing::random_density_matrix(2, rng);
        for (std::uint64_t k = 1; k < 16; ++k) {
            PauliIndex a = PauliIndex::from_packed(2, k);
            EXPECT_NEAR(born_probability(rho, a, 0) + born_probability(rho, a, 1), 1.0, 1e-12);
            for (int s = 0; s < 2; ++s) {
                Eigen::MatrixXcd post = post_measurement_state(rho, a, s);
                EXPECT_NEAR(born_probability(post, a, s), 1.0, 1e-12);
                EXPECT_LT((post_measurement_state(post, a, s) - post).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
        double total = 0;
        for (const auto &[k, v] : joint_distribution(rho, {P("XZ"), P("ZZ"), P("YI")})) {
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(qm_oracle, agrees_with_stabilizer_measurement) {
    for (std::size_t n = 1; n <= 2; ++n) {
        for (const auto &state : enumerate_stabilizer_states(n)) {
            Eigen::MatrixXcd rho = to_dense(state.projector());
            for (std::uint64_t k = 1; k < (std::uint64_t{1} << (2 * n)); ++k) {
                PauliIndex a = PauliIndex::from_packed(n, k);
                for (int s = 0; s < 2; ++s) {
                    MeasurementUpdate up = measure_stabilizer(state, a, s);
                    EXPECT_NEAR(born_probability(rho, a, s), up.weight.get_d(), 1e-12);
                    if (up.post) {
                        Eigen::MatrixXcd expected = to_dense(up.post->projector());
                        EXPECT_LT((post_measurement_state(rho, a, s) - expected).cwiseAbs().maxCoeff(), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(qm_oracle, total_variation_examples) {
    Distribution p{{"0", 1.0}};
    Distribution q{{"0", 0.5}, {"1", 0.5}};
    EXPECT_DOUBLE_EQ(total_variation(p, p), 0.0);
    EXPECT_DOUBLE_EQ(total_variation(p, q), 0.5);
    EXPECT_THROW(total_variation(p, Distribution{{"00", 1.0}}), Error);
}

TEST(qm_oracle, validation_and_kets) {
    EXPECT_NO_THROW(validate_density_matrix(zero_state()));
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(validate_density_matrix(neg), Error);
    EXPECT_THROW(validate_density_matrix(Eigen::MatrixXcd::Identity(2, 2)), Error);
    Eigen::VectorXcd ket = ket_from_json(nlohmann::json::parse("[[1,0],[0.7071067811865476,0.7071067811865476]]"));
    EXPECT_LT((ket_to_density(ket) - qhvm::testing::t_state_from_ket()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(ket_from_json(nlohmann::json::parse("[[1,0],[0,0],[0,0]]")), Error);
}

TEST(qm_oracle, clifford_application) {
    Eigen::MatrixXcd rho = apply_clifford(zero_state(), CliffordElement::hadamard(1, 0));
    EXPECT_LT((rho - plus_state()).cwiseAbs().maxCoeff(), 1e-12);
}
