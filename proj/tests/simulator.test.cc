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

#include "qhvm/simulator.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"

using namespace qhvm;

namespace {

std::shared_ptr<const VertexDictionary> cube() {
    static auto dict = std::make_shared<const VertexDictionary>(enumerate_vertices(build_halfspaces(1)));
    return dict;
}

PauliIndex P(const char *s) {
    return PauliIndex::from_string(s);
}

ProbVector state(const ExactOp &op) {
    return decompose_state(op, *cube());
}

}  // namespace

TEST(hvm_simulator, rng_stream) {
    // Reference value of the SplitMix64 finalizer.
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    std::vector<std::uint64_t> xs, ys, zs;
    for (int i = 0; i < 5; ++i) {
        xs.push_back(a.next());
        ys.push_back(b.next());
        zs.push_back(c.next());
    }
    EXPECT_EQ(xs, ys);
    EXPECT_NE(xs, zs);
    CounterRng u(1, 0);
    double mean = 0;
    for (int i = 0; i < 100000; ++i) {
        double v = u.uniform();
        ASSERT_GE(v, 0.0);
        ASSERT_LT(v, 1.0);
        mean += v;
    }
    EXPECT_NEAR(mean / 100000, 0.5, 0.005);
}

TEST(hvm_simulator, deterministic_outcomes) {
    KernelCache cache(cube());
    ProbVector zero = state(projector(P("Z"), 0));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EXPECT_EQ(run_trajectory(zero, {P("Z")}, cache, seed).outcomes(), "0");
        EXPECT_EQ(run_trajectory(zero, {P("Z"), P("Z")}, cache, seed).outcomes(), "00");
    }
    ProbVector t = decompose_state(from_dense(qhvm::testing::t_state_from_ket()), *cube());
    auto r1 = run_trajectory(t, {P("X"), P("Y"), P("Z")}, cache, 99, 3);
    auto r2 = run_trajectory(t, {P("X"), P("Y"), P("Z")}, cache, 99, 3);
    EXPECT_TRUE(r1 == r2);
    EXPECT_EQ(r1.steps.size(), 3u);
    for (const auto &s : r1.steps) {
        const TransitionKernel &k = cache.get(s.alpha, s.measurement);
        bool found = false;
        for (const auto &e : k.entries) {
            found = found || (e.beta == s.beta && e.outcome == s.outcome && sgn(e.weight) > 0);
        }
        EXPECT_TRUE(found);
    }
    EXPECT_NE(r1.log_lines().find("\"beta\""), std::string::npos);
}

TEST(hvm_simulator, exact_examples) {
    KernelCache cache(cube());
    ProbVector zero = state(projector(P("Z"), 0));
    auto d1 = exact_joint_distribution_rational(zero, {P("X")}, cache);
    EXPECT_EQ(d1["0"], Rational(1, 2));
    EXPECT_EQ(d1["1"], Rational(1, 2));
    auto d2 = exact_joint_distribution_rational(zero, {P("X"), P("Z")}, cache);
    for (const char *k : {"00", "01", "10", "11"}) {
        EXPECT_EQ(d2[k], Rational(1, 4));
    }
    ProbVector mixed = state(ExactOp::maximally_mixed(1));
    auto d3 = exact_joint_distribution_rational(mixed, {P("Z"), P("Z")}, cache);
    EXPECT_EQ(d3["00"], Rational(1, 2));
    EXPECT_EQ(d3["11"], Rational(1, 2));
    EXPECT_EQ(d3["01"], Rational(0));
    EXPECT_EQ(d3["10"], Rational(0));
}

TEST(hvm_simulator, agrees_with_oracle_on_sequences) {
    KernelCache cache(cube());
    std::mt19937_64 rng(123);
    const char *axes[] = {"X", "Y", "Z"};
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd rho = qhvm::testing::random_density_matrix(1, rng);
        ProbVector p = decompose_state(from_dense(rho), *cube());
        for (int code = 0; code < 27; ++code) {
            MeasurementSequence seq{P(axes[code % 3]), P(axes[(code / 3) % 3]), P(axes[code / 9])};
            Distribution hvm = exact_joint_distribution(p, seq, cache);
            Distribution qm = joint_distribution(rho, seq);
            ASSERT_EQ(hvm.size(), qm.size());
            for (const auto &[k, v] : qm) {
                EXPECT_NEAR(hvm[k], v, 1e-9) << k;
            }
        }
    }
}

TEST(hvm_simulator, conditional_state_matches_projection) {
    KernelCache cache(cube());
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXcd rho = qhvm::testing::random_density_matrix(1, rng);
        ProbVector p = decompose_state(from_dense(rho), *cube());
        MeasurementSequence seq{P("Y"), P("X")};
        for (const std::string outcomes : {"0", "1", "01", "10"}) {
            ProbVector cond = conditional_distribution(p, seq, outcomes, cache);
            Eigen::MatrixXcd expected = rho;
            for (std::size_t t = 0; t < outcomes.size(); ++t) {
                expected = post_measurement_state(expected, seq[t], outcomes[t] - '0');
            }
            EXPECT_LT(reconstruct(cond, *cube()).max_abs_difference(from_dense(expected)), 1e-9);
        }
    }
    ProbVector zero = state(projector(P("Z"), 0));
    EXPECT_THROW(conditional_distribution(zero, {P("Z")}, "1", cache), Error);
}

TEST(hvm_simulator, sampled_statistics) {
    KernelCache cache(cube());
    ProbVector t = decompose_state(from_dense(qhvm::testing::t_state_from_ket()), *cube());
    StatisticsReport r = sample_statistics(t, {P("X")}, 100000, 2024, cache);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_NEAR(r.rows[0].frequency, 0.5 * (1 + 1 / std::sqrt(2.0)), 0.01);
    EXPECT_LE(r.rows[0].ci_low, r.rows[0].frequency);
    EXPECT_GE(r.rows[0].ci_high, r.rows[0].frequency);

    ProbVector mixed = state(ExactOp::maximally_mixed(1));
    StatisticsReport coin = sample_statistics(mixed, {P("Z")}, 100000, 7, cache);
    EXPECT_NEAR(coin.rows[0].frequency, 0.5, 0.01);

    MeasurementSequence seq{P("X"), P("Z"), P("Y")};
    StatisticsReport multi = sample_statistics(t, seq, 100000, 11, cache, 4);
    EXPECT_LT(total_variation(multi.empirical(), exact_joint_distribution(t, seq, cache)), 0.01);
    StatisticsReport single = sample_statistics(t, seq, 100000, 11, cache, 1);
    EXPECT_EQ(single.to_csv(), multi.to_csv());
}

TEST(hvm_simulator, wilson_interval_values) {
    auto [lo0, hi0] = wilson_interval(0, 10);
    EXPECT_DOUBLE_EQ(lo0, 0.0);
    EXPECT_NEAR(hi0, 0.27753, 1e-5);
    auto [lo5, hi5] = wilson_interval(5, 10);
    EXPECT_NEAR(lo5, 0.23659, 1e-5);
    EXPECT_NEAR(hi5, 0.76341, 1e-5);
}

TEST(hvm_simulator, errors) {
    KernelCache cache(cube());
    ProbVector zero = state(projector(P("Z"), 0));
    PropagationBudget tiny;
    tiny.max_states = 2;
    try {
        exact_joint_distribution(zero, {P("X"), P("Y"), P("X")}, cache, tiny);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Budget);
    }
    EXPECT_THROW(run_trajectory(zero, {P("I")}, cache, 0), Error);
    EXPECT_THROW(parse_sequence(1, "X,ZZ"), Error);
    EXPECT_EQ(parse_sequence(2, "XZ,ZZ").size(), 2u);

    VertexDictionary small;
    small.n = 1;
    ExactOp a000(1), a110(1);
    for (const char *s : {"I", "X", "Y", "Z"}) {
        a000.set(P(s), Rational(1, 2));
    }
    a110 = a000;
    a110.set(P("X"), Rational(-1, 2));
    a110.set(P("Y"), Rational(-1, 2));
    small.vertices = {a000, a110};
    small.provenance = {Provenance::Loaded, Provenance::Loaded};
    small.canonicalize();
    auto small_ptr = std::make_shared<const VertexDictionary>(small);
    KernelCache small_cache(small_ptr);
    ProbVector p = ProbVector::delta(small, *small.index_of(a000));
    try {
        run_trajectory(p, {P("Z"), P("X")}, small_cache, 1);
        FAIL();
    } catch (const AbortedTrajectory &e) {
        EXPECT_EQ(e.step(), 2u);
    }
}
