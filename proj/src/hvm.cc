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

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "qhvm/lp.h"

namespace qhvm {

namespace {

std::size_t num_coefficients(std::size_t n) {
    return std::size_t{1} << (2 * n);
}

template <typename T>
std::vector<T> convert(const std::vector<Rational> &v) {
    std::vector<T> out;
    out.reserve(v.size());
    for (const auto &x : v) {
        out.push_back(ScalarTraits<T>::from_rational(x));
    }
    return out;
}

// Equality constraints: one row per Pauli coefficient, one column per
// vertex in `order`.
template <typename T>
LpResult<T> solve_over(const VertexDictionary &dict, const std::vector<T> &target,
                       const std::vector<std::size_t> &order, const std::vector<T> *objective = nullptr) {
    const std::size_t m = num_coefficients(dict.n);
    std::vector<std::vector<T>> rows(m, std::vector<T>(order.size(), T(0)));
    for (std::size_t j = 0; j < order.size(); ++j) {
        for (const auto &[key, c] : dict.vertices[order[j]].terms()) {
            rows[key][j] = ScalarTraits<T>::from_rational(c);
        }
    }
    return solve_feasibility(rows, target, objective);
}

std::vector<std::size_t> identity_order(std::size_t size) {
    std::vector<std::size_t> order(size);
    for (std::size_t j = 0; j < size; ++j) {
        order[j] = j;
    }
    return order;
}

void check_dictionary(const VertexDictionary &dict, std::size_t n) {
    if (dict.size() == 0) {
        throw Error(ErrorKind::Domain, "decompose: empty dictionary");
    }
    if (dict.n != n) {
        throw Error(ErrorKind::Dimension, "decompose: dictionary has a different qubit count");
    }
}

std::vector<double> to_doubles(const std::vector<Rational> &v) {
    std::vector<double> out;
    for (const auto &x : v) {
        out.push_back(x.get_d());
    }
    return out;
}

ProbVector finish_exact(const ExactOp &rho, const VertexDictionary &dict, const std::vector<std::size_t> &order,
                        const LpResult<Rational> &lp) {
    ProbVector p;
    p.dictionary_hash = dict.hash();
    std::vector<Rational> exact(dict.size(), Rational(0));
    for (std::size_t j = 0; j < order.size(); ++j) {
        exact[order[j]] = lp.solution[j];
    }
    p.weights = to_doubles(exact);
    p.exact = std::move(exact);
    ExactOp back = reconstruct_exact(p, dict);
    if (!(back == rho)) {
        throw Error(ErrorKind::Internal, "decompose: exact reconstruction mismatch");
    }
    p.residual = 0;
    return p;
}

[[noreturn]] void report_infeasible(const std::string &what, const VertexDictionary &dict, bool inside,
                                    std::vector<double> certificate) {
    if (dict.complete && inside) {
        throw Error(ErrorKind::Internal, what + " although the dictionary is complete and the target lies in Lambda");
    }
    throw InfeasibleDecomposition(what, std::move(certificate));
}

}  // namespace

std::vector<std::size_t> ProbVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        bool nonzero = exact ? sgn((*exact)[i]) != 0 : weights[i] != 0.0;
        if (nonzero) {
            out.push_back(i);
        }
    }
    return out;
}

ProbVector ProbVector::delta(const VertexDictionary &dict, std::size_t alpha) {
    if (alpha >= dict.size()) {
        throw Error(ErrorKind::Domain, "delta: vertex id out of range");
    }
    ProbVector p;
    p.dictionary_hash = dict.hash();
    p.weights.assign(dict.size(), 0.0);
    p.weights[alpha] = 1.0;
    p.exact = std::vector<Rational>(dict.size(), Rational(0));
    (*p.exact)[alpha] = 1;
    return p;
}

ProbVector decompose_state(const ExactOp &rho, const VertexDictionary &dict) {
    check_dictionary(dict, rho.num_qubits());
    if (rho.trace() != Rational(1)) {
        throw Error(ErrorKind::Domain, "decompose: operator trace is not 1");
    }
    auto order = identity_order(dict.size());
    auto lp = solve_over(dict, rho.dense_coefficients(), order);
    if (!lp.feasible) {
        bool inside = membership(rho, HalfspaceSystem(rho.num_qubits())).region != Region::Outside;
        report_infeasible("decompose: no nonnegative combination of dictionary vertices", dict, inside,
                          to_doubles(lp.farkas));
    }
    return finish_exact(rho, dict, order, lp);
}

ProbVector decompose_state(const RealOp &rho, const VertexDictionary &dict) {
    check_dictionary(dict, rho.num_qubits());
    if (std::fabs(rho.trace() - 1.0) > kDecompositionTolerance) {
        throw Error(ErrorKind::Domain, "decompose: operator trace is not 1");
    }
    auto order = identity_order(dict.size());
    auto lp = solve_over(dict, rho.dense_coefficients(), order);
    if (lp.feasible) {
        ProbVector p;
        p.dictionary_hash = dict.hash();
        p.weights = lp.solution;
        for (double &w : p.weights) {
            if (w < 0 && w >= -1e-12) {
                w = 0;
            }
        }
        p.residual = reconstruct(p, dict).max_abs_difference(rho);
        double total = 0;
        for (double w : p.weights) {
            total += w;
        }
        if (p.residual <= 1e-12 && std::fabs(total - 1.0) <= kDecompositionTolerance) {
            return p;
        }
    }
    // Degenerate or marginal float solve: redo the same LP exactly on the
    // binary value of the input.
    ExactOp exact_rho = to_exact(rho);
    exact_rho.set(PauliIndex::identity(rho.num_qubits()), dyadic(1, 2 * static_cast<unsigned>(rho.num_qubits())));
    auto exact_lp = solve_over(dict, exact_rho.dense_coefficients(), order);
    if (!exact_lp.feasible) {
        bool inside = membership(rho, HalfspaceSystem(rho.num_qubits())).region != Region::Outside;
        report_infeasible("decompose: no nonnegative combination of dictionary vertices", dict, inside,
                          to_doubles(exact_lp.farkas));
    }
    ProbVector p = finish_exact(exact_rho, dict, order, exact_lp);
    p.exact.reset();
    p.residual = reconstruct(p, dict).max_abs_difference(rho);
    return p;
}

RealOp reconstruct(const ProbVector &p, const VertexDictionary &dict) {
    if (p.weights.size() != dict.size()) {
        throw Error(ErrorKind::Dimension, "reconstruct: weight vector does not match the dictionary");
    }
    std::vector<double> acc(num_coefficients(dict.n), 0.0);
    for (std::size_t i = 0; i < dict.size(); ++i) {
        if (p.weights[i] == 0.0) {
            continue;
        }
        for (const auto &[key, c] : dict.vertices[i].terms()) {
            acc[key] += p.weights[i] * c.get_d();
        }
    }
    return RealOp::from_dense_coefficients(dict.n, acc);
}

ExactOp reconstruct_exact(const ProbVector &p, const VertexDictionary &dict) {
    if (!p.exact || p.exact->size() != dict.size()) {
        throw Error(ErrorKind::Domain, "reconstruct_exact: no exact weights");
    }
    std::vector<Rational> acc(num_coefficients(dict.n), Rational(0));
    for (std::size_t i = 0; i < dict.size(); ++i) {
        const Rational &w = (*p.exact)[i];
        if (sgn(w) == 0) {
            continue;
        }
        for (const auto &[key, c] : dict.vertices[i].terms()) {
            acc[key] += w * c;
        }
    }
    return ExactOp::from_dense_coefficients(dict.n, acc);
}

Rational TransitionKernel::exact_marginal(int s) const {
    Rational total(0);
    for (const auto &e : entries) {
        if (e.outcome == s) {
            total += e.weight;
        }
    }
    return total;
}

std::vector<KernelEntry> TransitionKernel::branch(int s) const {
    std::vector<KernelEntry> out;
    for (const auto &e : entries) {
        if (e.outcome == s) {
            out.push_back(e);
        }
    }
    return out;
}

void validate_kernel(const TransitionKernel &kernel, const VertexDictionary &dict) {
    if (kernel.alpha >= dict.size() || kernel.measurement.n != dict.n || kernel.measurement.is_identity()) {
        throw Error(ErrorKind::Format, "kernel: bad source vertex or measurement");
    }
    const ExactOp &source = dict.vertices[kernel.alpha];
    Rational total(0);
    for (int s = 0; s < 2; ++s) {
        ExactOp acc(dict.n);
        for (const auto &e : kernel.entries) {
            if (e.outcome != s) {
                continue;
            }
            if (e.beta >= dict.size() || sgn(e.weight) < 0) {
                throw Error(ErrorKind::Format, "kernel: bad destination or negative weight");
            }
            acc += e.weight * dict.vertices[e.beta];
            total += e.weight;
        }
        if (!(acc == source.project(kernel.measurement, s))) {
            throw Error(ErrorKind::Format, "kernel: reconstruction identity fails");
        }
    }
    if (total != Rational(1)) {
        throw Error(ErrorKind::Format, "kernel: weights do not sum to 1");
    }
}

TransitionKernel solve_kernel(std::size_t alpha, const PauliIndex &a, const VertexDictionary &dict) {
    if (alpha >= dict.size()) {
        throw Error(ErrorKind::Domain, "kernel: vertex id out of range");
    }
    if (a.n != dict.n) {
        throw Error(ErrorKind::Dimension, "kernel: measurement has wrong qubit count");
    }
    if (a.is_identity()) {
        throw Error(ErrorKind::InvalidObservable, "kernel: measurement of the identity");
    }
    std::vector<std::size_t> order(dict.size());
    for (std::size_t j = 0; j < dict.size(); ++j) {
        order[j] = (alpha + j) % dict.size();
    }
    // Among feasible kernels, keep as much weight on the source as possible.
    std::vector<Rational> keep_source(dict.size(), Rational(0));
    keep_source[0] = -1;
    TransitionKernel kernel;
    kernel.alpha = alpha;
    kernel.measurement = a;
    for (int s = 0; s < 2; ++s) {
        ExactOp target = dict.vertices[alpha].project(a, s);
        Rational t = target.trace();
        if (sgn(t) == 0) {
            if (!target.terms().empty()) {
                throw Error(ErrorKind::Internal, "kernel: traceless nonzero projection");
            }
            continue;
        }
        ExactOp normalized = (Rational(1) / t) * target;
        auto lp = solve_over(dict, normalized.dense_coefficients(), order, &keep_source);
        if (!lp.feasible) {
            std::ostringstream what;
            what << "kernel infeasible for alpha=" << alpha << " a=" << a.str() << " s=" << s;
            bool inside = membership(normalized, HalfspaceSystem(dict.n)).region != Region::Outside;
            report_infeasible(what.str(), dict, inside, to_doubles(lp.farkas));
        }
        std::vector<KernelEntry> branch;
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (sgn(lp.solution[j]) != 0) {
                branch.push_back({order[j], s, t * lp.solution[j]});
            }
        }
        std::sort(branch.begin(), branch.end(), [](const KernelEntry &x, const KernelEntry &y) { return x.beta < y.beta; });
        kernel.entries.insert(kernel.entries.end(), branch.begin(), branch.end());
    }
    return kernel;
}

KernelCache::KernelCache(std::shared_ptr<const VertexDictionary> dict) : dict_(std::move(dict)) {
    if (!dict_) {
        throw Error(ErrorKind::Domain, "KernelCache: null dictionary");
    }
    hash_ = dict_->hash();
}

const TransitionKernel &KernelCache::get(std::size_t alpha, const PauliIndex &a) {
    Key key{alpha, a.packed()};
    {
        std::shared_lock lock(mutex_);
        auto it = kernels_.find(key);
        if (it != kernels_.end()) {
            return *it->second;
        }
    }
    auto kernel = std::make_unique<const TransitionKernel>(solve_kernel(alpha, a, *dict_));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = kernels_.emplace(key, std::move(kernel));
    return *it->second;
}

bool KernelCache::contains(std::size_t alpha, const PauliIndex &a) const {
    std::shared_lock lock(mutex_);
    return kernels_.count({alpha, a.packed()}) > 0;
}

std::size_t KernelCache::size() const {
    std::shared_lock lock(mutex_);
    return kernels_.size();
}

nlohmann::json KernelCache::to_json() const {
    std::shared_lock lock(mutex_);
    nlohmann::json j;
    j["dictionary_hash"] = hex64(hash_);
    j["convention"] = kPhaseConventionId;
    j["records"] = nlohmann::json::array();
    for (const auto &[key, kernel] : kernels_) {
        for (int s = 0; s < 2; ++s) {
            nlohmann::json rec;
            rec["alpha"] = kernel->alpha;
            rec["a"] = kernel->measurement.hex();
            rec["s"] = s;
            rec["entries"] = nlohmann::json::array();
            for (const auto &e : kernel->branch(s)) {
                rec["entries"].push_back({e.beta, e.weight.get_num().get_str(), e.weight.get_den().get_str()});
            }
            j["records"].push_back(rec);
        }
    }
    return j;
}

void KernelCache::load_json(const nlohmann::json &j) {
    std::map<Key, TransitionKernel> loaded;
    try {
        if (j.at("convention").get<std::string>() != kPhaseConventionId) {
            throw Error(ErrorKind::ConventionMismatch, "kernel cache: phase convention differs");
        }
        if (j.at("dictionary_hash").get<std::string>() != hex64(hash_)) {
            throw Error(ErrorKind::Format, "kernel cache: stale cache for a different dictionary");
        }
        for (const auto &rec : j.at("records")) {
            std::size_t alpha = rec.at("alpha").get<std::size_t>();
            PauliIndex a = PauliIndex::from_hex(dict_->n, rec.at("a").get<std::string>());
            int s = rec.at("s").get<int>();
            if (s != 0 && s != 1) {
                throw Error(ErrorKind::Format, "kernel cache: outcome must be 0 or 1");
            }
            auto &kernel = loaded[{alpha, a.packed()}];
            kernel.alpha = alpha;
            kernel.measurement = a;
            for (const auto &e : rec.at("entries")) {
                Rational w(mpz_class(e.at(1).get<std::string>()), mpz_class(e.at(2).get<std::string>()));
                w.canonicalize();
                kernel.entries.push_back({e.at(0).get<std::size_t>(), s, w});
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("kernel cache: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw Error(ErrorKind::Format, std::string("kernel cache: bad rational: ") + e.what());
    }
    for (auto &[key, kernel] : loaded) {
        std::sort(kernel.entries.begin(), kernel.entries.end(), [](const KernelEntry &x, const KernelEntry &y) {
            return std::make_pair(x.outcome, x.beta) < std::make_pair(y.outcome, y.beta);
        });
        validate_kernel(kernel, *dict_);
    }
    std::unique_lock lock(mutex_);
    for (auto &[key, kernel] : loaded) {
        kernels_.emplace(key, std::make_unique<const TransitionKernel>(std::move(kernel)));
    }
}

void KernelCache::save(const std::string &path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Format, "kernel cache: cannot write " + path);
    }
    out << to_json().dump(1) << "\n";
}

void KernelCache::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Format, "kernel cache: cannot read " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("kernel cache: ") + e.what());
    }
    load_json(j);
}

double outcome_marginal(const TransitionKernel &kernel, int s) {
    return kernel.marginal(s);
}

double born_probability_hvm(const ProbVector &p, const PauliIndex &a, int s, KernelCache &cache) {
    if (p.exact) {
        return born_probability_hvm_exact(p, a, s, cache).get_d();
    }
    if (p.dictionary_hash != cache.dictionary_hash()) {
        throw Error(ErrorKind::Domain, "born_probability_hvm: probability vector belongs to another dictionary");
    }
    double total = 0;
    for (std::size_t alpha = 0; alpha < p.weights.size(); ++alpha) {
        if (p.weights[alpha] != 0.0) {
            total += p.weights[alpha] * cache.get(alpha, a).marginal(s);
        }
    }
    return total;
}

Rational born_probability_hvm_exact(const ProbVector &p, const PauliIndex &a, int s, KernelCache &cache) {
    if (!p.exact) {
        throw Error(ErrorKind::Domain, "born_probability_hvm_exact: no exact weights");
    }
    if (p.dictionary_hash != cache.dictionary_hash()) {
        throw Error(ErrorKind::Domain, "born_probability_hvm: probability vector belongs to another dictionary");
    }
    Rational total(0);
    for (std::size_t alpha = 0; alpha < p.exact->size(); ++alpha) {
        if (sgn((*p.exact)[alpha]) != 0) {
            total += (*p.exact)[alpha] * cache.get(alpha, a).exact_marginal(s);
        }
    }
    return total;
}

nlohmann::json prob_vector_to_json(const ProbVector &p) {
    nlohmann::json j;
    j["dictionary_hash"] = hex64(p.dictionary_hash);
    j["convention"] = kPhaseConventionId;
    j["count"] = p.weights.size();
    j["residual"] = p.residual;
    j["exact"] = p.exact.has_value();
    j["weights"] = nlohmann::json::array();
    for (std::size_t i : p.support()) {
        nlohmann::json w;
        w["id"] = i;
        w["value"] = p.weights[i];
        if (p.exact) {
            w["num"] = (*p.exact)[i].get_num().get_str();
            w["den"] = (*p.exact)[i].get_den().get_str();
        }
        j["weights"].push_back(w);
    }
    return j;
}

ProbVector prob_vector_from_json(const nlohmann::json &j, const VertexDictionary &dict) {
    try {
        if (j.at("convention").get<std::string>() != kPhaseConventionId) {
            throw Error(ErrorKind::ConventionMismatch, "probability vector: phase convention differs");
        }
        if (j.at("dictionary_hash").get<std::string>() != dict.hash_hex()) {
            throw Error(ErrorKind::Format, "probability vector: dictionary hash differs");
        }
        ProbVector p;
        p.dictionary_hash = dict.hash();
        p.weights.assign(dict.size(), 0.0);
        p.residual = j.value("residual", 0.0);
        bool exact = j.at("exact").get<bool>();
        if (exact) {
            p.exact = std::vector<Rational>(dict.size(), Rational(0));
        }
        for (const auto &w : j.at("weights")) {
            std::size_t id = w.at("id").get<std::size_t>();
            if (id >= dict.size()) {
                throw Error(ErrorKind::Format, "probability vector: id out of range");
            }
            p.weights[id] = w.at("value").get<double>();
            if (exact) {
                Rational r(mpz_class(w.at("num").get<std::string>()), mpz_class(w.at("den").get<std::string>()));
                r.canonicalize();
                (*p.exact)[id] = r;
                p.weights[id] = r.get_d();
            }
            if (p.weights[id] < 0) {
                throw Error(ErrorKind::Format, "probability vector: negative weight");
            }
        }
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("probability vector: ") + e.what());
    }
}

}  // namespace qhvm
