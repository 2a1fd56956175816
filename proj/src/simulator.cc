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

#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace qhvm {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::vector<std::string> all_strings(std::size_t len) {
    if (len > 20) {
        throw Error(ErrorKind::Capacity, "outcome alphabet too large to list");
    }
    std::vector<std::string> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
        std::string s(len, '0');
        for (std::size_t k = 0; k < len; ++k) {
            if ((v >> (len - 1 - k)) & 1) {
                s[k] = '1';
            }
        }
        out.push_back(s);
    }
    return out;
}

template <typename W>
W weight_of(const ProbVector &p, std::size_t i) {
    if constexpr (std::is_same_v<W, Rational>) {
        return (*p.exact)[i];
    } else {
        return p.weights[i];
    }
}

template <typename W>
W kernel_weight(const KernelEntry &e) {
    if constexpr (std::is_same_v<W, Rational>) {
        return e.weight;
    } else {
        return e.weight.get_d();
    }
}

template <typename W>
bool is_nonzero(const W &w) {
    if constexpr (std::is_same_v<W, Rational>) {
        return sgn(w) != 0;
    } else {
        return w != 0.0;
    }
}

void check_inputs(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache) {
    if (p.dictionary_hash != cache.dictionary_hash() || p.weights.size() != cache.dictionary().size()) {
        throw Error(ErrorKind::Domain, "simulator: probability vector belongs to another dictionary");
    }
    validate_sequence(seq, cache.dictionary().n);
}

template <typename W>
std::map<std::string, W> propagate(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache,
                                   const PropagationBudget &budget) {
    check_inputs(p, seq, cache);
    std::map<std::string, std::map<std::size_t, W>> frontier;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        W w = weight_of<W>(p, i);
        if (is_nonzero(w)) {
            frontier[""][i] = w;
        }
    }
    for (const auto &a : seq) {
        std::map<std::string, std::map<std::size_t, W>> next;
        std::size_t live = 0;
        for (const auto &[prefix, weights] : frontier) {
            for (const auto &[alpha, w] : weights) {
                const TransitionKernel &k = cache.get(alpha, a);
                for (const auto &e : k.entries) {
                    auto &slot = next[prefix + char('0' + e.outcome)];
                    auto [it, inserted] = slot.emplace(e.beta, W(0));
                    it->second += w * kernel_weight<W>(e);
                    live += inserted;
                }
            }
        }
        if (live > budget.max_states) {
            throw Error(ErrorKind::Budget, "exact_joint_distribution: trajectory tree exceeds the state budget");
        }
        frontier = std::move(next);
    }
    std::map<std::string, W> out;
    for (const auto &s : all_strings(seq.size())) {
        out[s] = W(0);
    }
    for (const auto &[prefix, weights] : frontier) {
        for (const auto &[alpha, w] : weights) {
            out[prefix] += w;
        }
    }
    return out;
}

}  // namespace

void validate_sequence(const MeasurementSequence &seq, std::size_t n) {
    for (const auto &a : seq) {
        if (a.n != n) {
            throw Error(ErrorKind::Dimension, "measurement sequence: wrong qubit count");
        }
        if (a.is_identity()) {
            throw Error(ErrorKind::InvalidObservable, "measurement sequence: identity is not a measurement");
        }
    }
}

MeasurementSequence parse_sequence(std::size_t n, const std::string &text) {
    MeasurementSequence seq;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) {
            continue;
        }
        seq.push_back(PauliIndex::from_string(item));
    }
    validate_sequence(seq, n);
    return seq;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed + kGolden * (stream + 1))) {
}

std::uint64_t CounterRng::next() {
    ++counter_;
    return splitmix64(key_ + kGolden * counter_);
}

double CounterRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::string TrajectoryRecord::outcomes() const {
    std::string out;
    for (const auto &s : steps) {
        out.push_back(char('0' + s.outcome));
    }
    return out;
}

std::string TrajectoryRecord::log_lines() const {
    std::string out;
    for (const auto &s : steps) {
        nlohmann::json j;
        j["t"] = s.t;
        j["alpha"] = s.alpha;
        j["a"] = s.measurement.str();
        j["beta"] = s.beta;
        j["s"] = s.outcome;
        out += j.dump() + "\n";
    }
    return out;
}

bool TrajectoryRecord::operator==(const TrajectoryRecord &other) const {
    if (seed != other.seed || index != other.index || alpha0 != other.alpha0 || steps.size() != other.steps.size()) {
        return false;
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto &x = steps[k];
        const auto &y = other.steps[k];
        if (x.t != y.t || x.alpha != y.alpha || x.measurement != y.measurement || x.beta != y.beta ||
            x.outcome != y.outcome) {
            return false;
        }
    }
    return true;
}

std::size_t sample_vertex(const ProbVector &p, CounterRng &rng) {
    double u = rng.uniform();
    double acc = 0;
    std::size_t last = p.weights.size();
    for (std::size_t i : p.support()) {
        acc += p.weights[i];
        last = i;
        if (u < acc) {
            return i;
        }
    }
    if (last == p.weights.size()) {
        throw Error(ErrorKind::Domain, "sample_vertex: empty support");
    }
    return last;
}

std::pair<std::size_t, int> sample_transition(const TransitionKernel &kernel, CounterRng &rng) {
    if (kernel.entries.empty()) {
        throw Error(ErrorKind::Internal, "sample_transition: empty kernel");
    }
    double u = rng.uniform();
    double acc = 0;
    for (const auto &e : kernel.entries) {
        acc += e.weight.get_d();
        if (u < acc) {
            return {e.beta, e.outcome};
        }
    }
    return {kernel.entries.back().beta, kernel.entries.back().outcome};
}

TrajectoryRecord run_trajectory(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache,
                                std::uint64_t seed, std::uint64_t index) {
    check_inputs(p, seq, cache);
    CounterRng rng(seed, index);
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.index = index;
    rec.alpha0 = sample_vertex(p, rng);
    std::size_t alpha = rec.alpha0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const TransitionKernel *kernel = nullptr;
        try {
            kernel = &cache.get(alpha, seq[t]);
        } catch (const InfeasibleDecomposition &e) {
            throw AbortedTrajectory("trajectory aborted at step " + std::to_string(t + 1) + ": " + e.what(), t + 1);
        }
        auto [beta, s] = sample_transition(*kernel, rng);
        rec.steps.push_back({t + 1, alpha, seq[t], beta, s});
        alpha = beta;
    }
    return rec;
}

Distribution exact_joint_distribution(const ProbVector &p, const MeasurementSequence &seq, KernelCache &cache,
                                      const PropagationBudget &budget) {
    if (p.exact) {
        Distribution out;
        for (const auto &[k, v] : exact_joint_distribution_rational(p, seq, cache, budget)) {
            out[k] = v.get_d();
        }
        return out;
    }
    return propagate<double>(p, seq, cache, budget);
}

std::map<std::string, Rational> exact_joint_distribution_rational(const ProbVector &p, const MeasurementSequence &seq,
                                                                  KernelCache &cache,
                                                                  const PropagationBudget &budget) {
    if (!p.exact) {
        throw Error(ErrorKind::Domain, "exact_joint_distribution_rational: no exact weights");
    }
    return propagate<Rational>(p, seq, cache, budget);
}

ProbVector conditional_distribution(const ProbVector &p, const MeasurementSequence &seq, const std::string &outcomes,
                                    KernelCache &cache) {
    check_inputs(p, seq, cache);
    if (outcomes.size() > seq.size()) {
        throw Error(ErrorKind::Domain, "conditional_distribution: more outcomes than measurements");
    }
    std::vector<double> w = p.weights;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        int s = outcomes[t] - '0';
        std::vector<double> next(w.size(), 0.0);
        for (std::size_t alpha = 0; alpha < w.size(); ++alpha) {
            if (w[alpha] == 0.0) {
                continue;
            }
            for (const auto &e : cache.get(alpha, seq[t]).entries) {
                if (e.outcome == s) {
                    next[e.beta] += w[alpha] * e.weight.get_d();
                }
            }
        }
        w = std::move(next);
    }
    double total = 0;
    for (double x : w) {
        total += x;
    }
    if (total <= 1e-15) {
        throw Error(ErrorKind::InvalidState, "conditional_distribution: zero-probability outcome prefix");
    }
    ProbVector out;
    out.dictionary_hash = p.dictionary_hash;
    for (double &x : w) {
        x /= total;
    }
    out.weights = std::move(w);
    return out;
}

Distribution StatisticsReport::empirical() const {
    Distribution out;
    for (const auto &r : rows) {
        out[r.outcome] = r.frequency;
    }
    return out;
}

std::string StatisticsReport::to_csv() const {
    std::ostringstream out;
    out << "outcome,count,frequency,ci_low,ci_high\n";
    out << std::setprecision(10);
    for (const auto &r : rows) {
        out << r.outcome << "," << r.count << "," << r.frequency << "," << r.ci_low << "," << r.ci_high << "\n";
    }
    return out.str();
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

StatisticsReport sample_statistics(const ProbVector &p, const MeasurementSequence &seq, std::uint64_t trials,
                                   std::uint64_t seed, KernelCache &cache, std::size_t threads) {
    if (trials == 0) {
        throw Error(ErrorKind::Domain, "sample_statistics: need at least one trial");
    }
    check_inputs(p, seq, cache);
    threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, trials));
    std::vector<std::map<std::string, std::uint64_t>> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](std::size_t w) {
        try {
            for (std::uint64_t j = w; j < trials; j += threads) {
                ++partial[w][run_trajectory(p, seq, cache, seed, j).outcomes()];
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::map<std::string, std::uint64_t> counts;
    for (const auto &s : all_strings(seq.size())) {
        counts[s] = 0;
    }
    for (const auto &part : partial) {
        for (const auto &[k, c] : part) {
            counts[k] += c;
        }
    }
    StatisticsReport report;
    report.trials = trials;
    report.seed = seed;
    for (const auto &[k, c] : counts) {
        auto [lo, hi] = wilson_interval(c, trials);
        report.rows.push_back({k, c, static_cast<double>(c) / static_cast<double>(trials), lo, hi});
    }
    return report;
}

}  // namespace qhvm
