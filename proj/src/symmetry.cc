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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhvm/simulator.h"

namespace qhvm {

namespace {

double coefficient_distance(const RealOp &a, const RealOp &b) {
    auto x = a.dense_coefficients(), y = b.dense_coefficients();
    double d = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        d = std::max(d, std::abs(x[k] - y[k]));
    }
    return d;
}

double trace_product(const RealOp &a, const RealOp &b) {
    double total = 0;
    for (const auto &[key, c] : a.terms()) {
        total += c * b.coefficient(PauliIndex::from_packed(a.num_qubits(), key));
    }
    return total * static_cast<double>(std::uint64_t{1} << a.num_qubits());
}

// Random point of the polytope: a random mixture of a few vertices.
RealOp random_member(const VertexDictionary &dict, CounterRng &rng) {
    RealOp out(dict.n);
    std::size_t parts = 1 + rng.next() % 4;
    std::vector<double> w(parts);
    double total = 0;
    for (auto &x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (std::size_t k = 0; k < parts; ++k) {
        RealOp v = to_real(dict.vertices[rng.next() % dict.size()]);
        for (const auto &[key, c] : v.terms()) {
            out.add(PauliIndex::from_packed(dict.n, key), c * w[k] / total);
        }
    }
    return out;
}

// Random Hermitian operator with coefficients in [-1, 1].
RealOp random_operator(std::size_t n, CounterRng &rng) {
    RealOp out(n);
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << (2 * n)); ++key) {
        out.set(PauliIndex::from_packed(n, key), 2 * rng.uniform() - 1);
    }
    return out;
}

std::string format_residual(double r) {
    std::ostringstream os;
    os.precision(3);
    os << r;
    return os.str();
}

}  // namespace

bool VertexPermutation::complete() const {
    return std::all_of(image.begin(), image.end(), [](const auto &x) { return x.has_value(); });
}

std::size_t VertexPermutation::operator()(std::size_t alpha) const {
    if (alpha >= image.size() || !image[alpha]) {
        throw Error(ErrorKind::Domain, "vertex orbit: image undefined for vertex " + std::to_string(alpha));
    }
    return *image[alpha];
}

VertexPermutation vertex_orbit(const CliffordElement &g, const VertexDictionary &dict) {
    if (g.num_qubits() != dict.n) {
        throw Error(ErrorKind::Dimension, "vertex_orbit: qubit count mismatch");
    }
    VertexPermutation pi{g, {}};
    pi.image.reserve(dict.size());
    for (std::size_t alpha = 0; alpha < dict.size(); ++alpha) {
        auto beta = dict.index_of(g.act(dict.vertices[alpha]));
        if (!beta && dict.complete) {
            throw Error(ErrorKind::Internal, "completeness violation: the image of vertex " + std::to_string(alpha) +
                                                 " under a Clifford is not in the dictionary");
        }
        pi.image.push_back(beta);
    }
    return pi;
}

bool is_group_action(const VertexPermutation &g, const VertexPermutation &h, const VertexPermutation &gh) {
    for (std::size_t alpha = 0; alpha < h.image.size(); ++alpha) {
        const auto &mid = h.image[alpha];
        if (!mid || !g.image.at(*mid) || !gh.image[alpha]) {
            continue;
        }
        if (*g.image[*mid] != *gh.image[alpha]) {
            return false;
        }
    }
    return true;
}

CovarianceCheck check_covariance(const CliffordElement &g, const RealOp &a, const VertexDictionary &dict,
                                 double tol) {
    return check_covariance(vertex_orbit(g, dict), a, dict, tol);
}

CovarianceCheck check_covariance(const VertexPermutation &pi, const RealOp &a, const VertexDictionary &dict,
                                 double tol) {
    ProbVector p = decompose_state(a, dict);
    RealOp pushed(dict.n);
    for (std::size_t alpha = 0; alpha < p.weights.size(); ++alpha) {
        if (p.weights[alpha] == 0.0) {
            continue;
        }
        if (!pi.image[alpha]) {
            return {false, std::numeric_limits<double>::infinity()};
        }
        RealOp v = to_real(dict.vertices[*pi.image[alpha]]);
        for (const auto &[key, c] : v.terms()) {
            pushed.add(PauliIndex::from_packed(dict.n, key), c * p.weights[alpha]);
        }
    }
    double residual = coefficient_distance(pushed, pi.g.act(a));
    return {residual <= tol, residual};
}

DualFunction dual_of_projector(const PauliIndex &a, int s, KernelCache &cache) {
    const auto &dict = cache.dictionary();
    DualFunction out;
    out.values.resize(dict.size());
    for (std::size_t alpha = 0; alpha < dict.size(); ++alpha) {
        out.values[alpha] = a.is_identity() ? (s == 0 ? 1.0 : 0.0) : cache.get(alpha, a).marginal(s);
    }
    return out;
}

DualFunction dual_function(const RealOp &a, KernelCache &cache) {
    const auto &dict = cache.dictionary();
    if (a.num_qubits() != dict.n) {
        throw Error(ErrorKind::Dimension, "dual_function: qubit count mismatch");
    }
    DualFunction out;
    out.values.assign(dict.size(), 0.0);
    for (const auto &[key, c] : a.terms()) {
        PauliIndex idx = PauliIndex::from_packed(dict.n, key);
        for (std::size_t alpha = 0; alpha < dict.size(); ++alpha) {
            double w = 1.0;
            if (!idx.is_identity()) {
                const auto &k = cache.get(alpha, idx);
                w = k.marginal(0) - k.marginal(1);
            }
            out.values[alpha] += c * w;
        }
    }
    return out;
}

bool SwReport::passed() const {
    return std::all_of(criteria.begin(), criteria.end(),
                       [](const auto &c) { return c.name == "linearity" || c.status == "PASS"; });
}

const CriterionResult &SwReport::at(const std::string &name) const {
    for (const auto &c : criteria) {
        if (c.name == name) {
            return c;
        }
    }
    throw Error(ErrorKind::Domain, "sw report: no criterion " + name);
}

nlohmann::json SwReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["dictionary_hash"] = dictionary_hash;
    j["convention"] = kPhaseConventionId;
    j["passed"] = passed();
    j["criteria"] = nlohmann::json::array();
    for (const auto &c : criteria) {
        j["criteria"].push_back({{"name", c.name}, {"status", c.status}, {"residual", c.residual}, {"detail", c.detail}});
    }
    return j;
}

SwReport sw_checks(const VertexDictionary &dict, KernelCache &cache, std::uint64_t seed, std::size_t samples,
                   double tol) {
    if (!dict.complete) {
        throw Error(ErrorKind::Domain, "sw_checks: needs a complete vertex dictionary");
    }
    if (cache.dictionary_hash() != dict.hash()) {
        throw Error(ErrorKind::Domain, "sw_checks: kernel cache belongs to another dictionary");
    }
    const std::size_t n = dict.n;
    SwReport report;
    report.n = n;
    report.dictionary_hash = dict.hash_hex();
    CounterRng rng(seed, 0);

    std::vector<RealOp> states;
    for (std::size_t k = 0; k < samples; ++k) {
        states.push_back(random_member(dict, rng));
    }

    // (0) The map is one-to-many: count pairs with A_alpha + A_beta = 2 I / 2^n.
    {
        ExactOp twice_mixed = ExactOp::maximally_mixed(n);
        twice_mixed += ExactOp::maximally_mixed(n);
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < dict.size(); ++a) {
            ExactOp rest = twice_mixed;
            rest -= dict.vertices[a];
            if (auto b = dict.index_of(rest); b && *b > a) {
                ++pairs;
            }
        }
        CriterionResult c{"linearity", "FAILED-BY-DESIGN", 0, ""};
        c.detail = "the state-to-distribution map is not unique: the maximally mixed state is an equal mixture of " +
                   std::to_string(pairs) + " distinct vertex pairs";
        report.criteria.push_back(c);
    }

    // (1) Reality: every A_alpha is Hermitian, so real weights suffice.
    {
        double residual = 0;
        if (n <= kMaxDenseQubits) {
            for (const auto &v : dict.vertices) {
                Eigen::MatrixXcd m = to_dense(to_real(v));
                residual = std::max(residual, (m - m.adjoint()).cwiseAbs().maxCoeff());
            }
        }
        report.criteria.push_back(
            {"reality", residual <= tol ? "PASS" : "FAIL", residual, "max |A - A^dagger| over vertices"});
    }

    // (2) Standardization: sum_alpha W_A(alpha) = Tr A.
    {
        double residual = 0;
        for (const auto &a : states) {
            ProbVector p = decompose_state(a, dict);
            double total = 0;
            for (double w : p.weights) {
                total += w;
            }
            residual = std::max({residual, std::abs(total - a.trace()), p.residual});
        }
        report.criteria.push_back({"standardization", residual <= tol ? "PASS" : "FAIL", residual,
                                   std::to_string(states.size()) + " sampled operators"});
    }

    // (3) Covariance over the whole Clifford group.
    {
        auto group = enumerate_clifford(n);
        std::vector<VertexPermutation> orbits;
        bool ok = true;
        double residual = 0;
        std::string detail;
        try {
            for (const auto &g : group) {
                orbits.push_back(vertex_orbit(g, dict));
            }
        } catch (const Error &e) {
            ok = false;
            detail = e.what();
        }
        if (ok) {
            for (std::size_t gi = 0; gi < orbits.size() && ok; ++gi) {
                for (std::size_t k = 0; k < std::min<std::size_t>(states.size(), 4) && ok; ++k) {
                    auto c = check_covariance(orbits[gi], states[(gi + k) % states.size()], dict, tol);
                    residual = std::max(residual, c.residual);
                    ok = c.ok;
                }
            }
            // Group action on a sample of pairs (all pairs for n = 1).
            std::size_t pairs = n == 1 ? group.size() * group.size() : 100;
            for (std::size_t t = 0; t < pairs && ok; ++t) {
                std::size_t i = n == 1 ? t / group.size() : rng.next() % group.size();
                std::size_t j = n == 1 ? t % group.size() : rng.next() % group.size();
                auto gh = vertex_orbit(group[i].compose(group[j]), dict);
                ok = is_group_action(orbits[i], orbits[j], gh);
            }
            detail = std::to_string(group.size()) + " Cliffords x " + std::to_string(dict.size()) +
                     " vertices; orbit maps form a group action";
        }
        report.criteria.push_back({"covariance", ok && residual <= tol ? "PASS" : "FAIL", residual, detail});
    }

    // (4) Traciality: Tr(A B) = sum_alpha W~_A(alpha) W_B(alpha).
    {
        double residual = 0;
        std::size_t checked = 0;
        for (std::uint64_t key = 1; key < (std::uint64_t{1} << (2 * n)); ++key) {
            PauliIndex a = PauliIndex::from_packed(n, key);
            for (int s = 0; s < 2; ++s) {
                RealOp proj = to_real(projector(a, s));
                DualFunction direct = dual_of_projector(a, s, cache);
                DualFunction linear = dual_function(proj, cache);
                for (std::size_t beta = 0; beta < dict.size(); ++beta) {
                    double tr = trace_product(proj, to_real(dict.vertices[beta]));
                    residual = std::max({residual, std::abs(tr - direct.values[beta]),
                                         std::abs(tr - linear.values[beta])});
                    ++checked;
                }
            }
        }
        for (std::size_t k = 0; k < states.size(); ++k) {
            RealOp a = random_operator(n, rng);
            DualFunction wa = dual_function(a, cache);
            ProbVector p = decompose_state(states[k], dict);
            double sum = 0;
            for (std::size_t alpha = 0; alpha < p.weights.size(); ++alpha) {
                sum += wa.values[alpha] * p.weights[alpha];
            }
            residual = std::max(residual, std::abs(sum - trace_product(a, states[k])));
            ++checked;
        }
        report.criteria.push_back({"traciality", residual <= tol ? "PASS" : "FAIL", residual,
                                   std::to_string(checked) + " (operator, state) pairs, max residual " +
                                       format_residual(residual)});
    }
    return report;
}

nlohmann::json orbit_table_json(const std::vector<VertexPermutation> &orbits) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        nlohmann::json perm = nlohmann::json::array();
        for (const auto &x : orbits[k].image) {
            perm.push_back(x ? static_cast<long long>(*x) : -1LL);
        }
        out.push_back({{"g_id", k}, {"g", orbits[k].g.to_json()}, {"permutation", perm}});
    }
    return out;
}

}  // namespace qhvm
