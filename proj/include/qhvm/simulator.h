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


#ifndef QHVM_SIMULATOR_H
#define QHVM_SIMULATOR_H

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qhvm/hvm.h"
#include "qhvm/oracle.h"

namespace qhvm {

using MeasurementSequence = std::vector<PauliIndex>;

/// Throws InvalidObservable / Dimension for identity or mismatched entries.
void validate_sequence(const MeasurementSequence &seq, std::size_t n);
MeasurementSequence parse_sequence(std::size_t n, const std::string &text);

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based stream: word k of trajectory j under master seed m is
/// splitmix64(splitmix64(m + phi*(j+1)) + phi*(k+1)), phi = 0x9e3779b97f4a7c15.
/// Uniforms take the top 53 bits.
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    double uniform();
    std::uint64_t counter() const {
        return counter_;
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct TrajectoryStep {
    std::size_t t = 0;
    std::size_t alpha = 0;
    PauliIndex measurement;
    std::size_t beta = 0;
    int outcome = 0;
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::size_t alpha0 = 0;
    std::vector<TrajectoryStep> steps;

    std::string outcomes() const;
    /// One JSON object per step: {t, alpha, a, beta, s}.
    std::string log_lines() const;
    bool operator==(const TrajectoryRecord &other) const;
};

class AbortedTrajectory : public Error {
   public:
    AbortedTrajectory(const std::string &what, std::size_t step) : Error(ErrorKind::Infeasible, what), step_(step) {
    }
    std::size_t step() const {
        return step_;
    }

   private:
    std::size_t step_;
};

std::size_t sample_vertex(const ProbVector &p, CounterRng &rng);
/// Samples (beta, s) from q_{alpha,a}.
std::pair<std::size_t, int> sample_transition(const TransitionKernel &kernel, CounterRng &rng);

TrajectoryRecord run_trajectory(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache,
                                std::uint64_t seed, std::uint64_t index = 0);

struct PropagationBudget {
    /// Cap on live (outcome prefix, vertex) pairs.
    std::size_t max_states = 4'000'000;
};

/// Sum over all trajectories; every outcome string is listed.
Distribution exact_joint_distribution(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache,
                                      const PropagationBudget &budget = {});
/// Same in rational arithmetic; needs exact weights in p.
std::map<std::string, Rational> exact_joint_distribution_rational(const ProbVector &p, const MeasurementSequence &seq,
                                                                  KernelCache &cache,
                                                                  const PropagationBudget &budget = {});

/// Vertex distribution after observing `outcomes` on the sequence's prefix,
/// renormalized. Throws InvalidState for a zero-probability prefix.
ProbVector conditional_distribution(const ProbVector &p, const MeasurementSequence &seq, const std::string &outcomes,
                                    KernelCache &cache);

struct StatisticsRow {
    std::string outcome;
    std::uint64_t count = 0;
    double frequency = 0;
    double ci_low = 0;
    double ci_high = 0;
};

struct StatisticsReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<StatisticsRow> rows;

    Distribution empirical() const;
    /// outcome,count,frequency,ci_low,ci_high
    std::string to_csv() const;
};

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// N independent trajectories; trajectory j uses stream j, so the result
/// does not depend on `threads`.
StatisticsReport sample_statistics(const ProbVector &p, const MeasurementSequence &seq, std::uint64_t trials,
                                   std::uint64_t seed, KernelCache &cache, std::size_t threads = 1);

}  // namespace qhvm

#endif
