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


#include "qhvm/qcm.h"

#include <cmath>
#include <complex>
#include <functional>
#include <thread>

namespace qhvm {

namespace {

constexpr std::size_t kMaxProgramSteps = 16;

int parity_of(const std::vector<std::size_t> &control, const std::string &prefix) {
    int p = 0;
    for (auto k : control) {
        p ^= prefix.at(k) - '0';
    }
    return p;
}

std::string prefix_of(std::uint64_t bits, std::size_t len) {
    std::string s(len, '0');
    for (std::size_t k = 0; k < len; ++k) {
        if ((bits >> k) & 1) {
            s[k] = '1';
        }
    }
    return s;
}

// Tabulates `rule` over every assignment of the j earlier outcomes, then
// drops dependencies that never change the branch.
ProgramStep tabulate(std::size_t j, const std::function<Branch(const std::string &)> &rule) {
    if (j >= kMaxProgramSteps) {
        throw Error(ErrorKind::Capacity, "program: too many measurements for outcome tables");
    }
    std::vector<Branch> full(std::size_t{1} << j);
    for (std::uint64_t v = 0; v < full.size(); ++v) {
        full[v] = rule(prefix_of(v, j));
    }
    std::vector<std::size_t> deps;
    std::uint64_t dropped = 0;
    for (std::size_t d = 0; d < j; ++d) {
        bool matters = false;
        for (std::uint64_t v = 0; v < full.size() && !matters; ++v) {
            if (((v >> d) & 1) == 0 && (v & dropped) == 0) {
                std::uint64_t w = v | (std::uint64_t{1} << d);
                // Compare over all settings of the still-kept variables.
                matters = !(full[v] == full[w]);
            }
        }
        if (matters) {
            deps.push_back(d);
        } else {
            dropped |= std::uint64_t{1} << d;
        }
    }
    ProgramStep step;
    step.depends_on = deps;
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << deps.size()); ++key) {
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < deps.size(); ++k) {
            if ((key >> k) & 1) {
                v |= std::uint64_t{1} << deps[k];
            }
        }
        step.table[key] = full[v];
    }
    return step;
}

std::vector<std::string> all_prefixes(std::size_t len) {
    std::vector<std::string> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
        out.push_back(prefix_of(v, len));
    }
    return out;
}

PauliIndex restrict_low(const PauliIndex &a, std::size_t keep) {
    std::uint64_t mask = keep >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << keep) - 1;
    return PauliIndex{keep, a.x & mask, a.z & mask};
}

PauliIndex restrict_high(const PauliIndex &a, std::size_t keep) {
    return PauliIndex{a.n - keep, a.x >> keep, a.z >> keep};
}

PauliIndex embed_high(const PauliIndex &b, std::size_t keep) {
    return PauliIndex{b.n + keep, b.x << keep, b.z << keep};
}

CliffordElement named_gate(std::size_t n, const std::string &name, const std::vector<std::size_t> &q) {
    auto need = [&](std::size_t count) {
        if (q.size() != count) {
            throw Error(ErrorKind::Format, "circuit: gate " + name + " takes " + std::to_string(count) + " qubits");
        }
        for (auto k : q) {
            if (k >= n) {
                throw Error(ErrorKind::Format, "circuit: qubit out of range");
            }
        }
    };
    if (name == "H") {
        need(1);
        return CliffordElement::hadamard(n, q[0]);
    }
    if (name == "S") {
        need(1);
        return CliffordElement::phase(n, q[0]);
    }
    if (name == "SDG") {
        need(1);
        return CliffordElement::phase_dagger(n, q[0]);
    }
    if (name == "X" || name == "Y" || name == "Z") {
        need(1);
        return CliffordElement::pauli(PauliIndex::single(n, q[0], name[0]));
    }
    if (name == "CNOT" || name == "CX") {
        need(2);
        return CliffordElement::cnot(n, q[0], q[1]);
    }
    if (name == "CZ") {
        need(2);
        return CliffordElement::cz(n, q[0], q[1]);
    }
    if (name == "SWAP") {
        need(2);
        return CliffordElement::swap(n, q[0], q[1]);
    }
    throw Error(ErrorKind::Domain, "circuit: unsupported gate '" + name + "' (only Clifford gates are allowed)");
}

template <typename W>
W half() {
    return W(1) / W(2);
}

template <typename W>
std::map<std::string, W> run_program(const MeasurementProgram &prog, const ProbVector &p, KernelCache &cache) {
    if (p.dictionary_hash != cache.dictionary_hash() || cache.dictionary().n != prog.n) {
        throw Error(ErrorKind::Domain, "program: probability vector or dictionary does not match the program");
    }
    std::map<std::string, std::map<std::size_t, W>> frontier;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        if constexpr (std::is_same_v<W, Rational>) {
            if (sgn((*p.exact)[i]) != 0) {
                frontier[""][i] = (*p.exact)[i];
            }
        } else {
            if (p.weights[i] != 0.0) {
                frontier[""][i] = p.weights[i];
            }
        }
    }
    for (const auto &step : prog.steps) {
        std::map<std::string, std::map<std::size_t, W>> next;
        for (const auto &[prefix, weights] : frontier) {
            const Branch &b = step.branch(prefix);
            auto &zero = next[prefix + '0'];
            auto &one = next[prefix + '1'];
            for (const auto &[alpha, w] : weights) {
                switch (b.kind) {
                    case Branch::Kind::Fixed:
                        (b.value ? one : zero)[alpha] += w;
                        break;
                    case Branch::Kind::Coin:
                        zero[alpha] += w * half<W>();
                        one[alpha] += w * half<W>();
                        break;
                    case Branch::Kind::Measure:
                        for (const auto &e : cache.get(alpha, b.observable).entries) {
                            W q;
                            if constexpr (std::is_same_v<W, Rational>) {
                                q = e.weight;
                            } else {
                                q = e.weight.get_d();
                            }
                            ((e.outcome ^ b.sign) ? one : zero)[e.beta] += w * q;
                        }
                        break;
                }
            }
        }
        frontier = std::move(next);
    }
    std::map<std::string, W> out;
    for (const auto &[prefix, weights] : frontier) {
        W total(0);
        for (const auto &[alpha, w] : weights) {
            total += w;
        }
        out[prefix] = total;
    }
    return out;
}

}  // namespace

MagicState magic_state(std::size_t copies) {
    if (copies < 1) {
        throw Error(ErrorKind::Domain, "magic_state: need at least one copy");
    }
    if (copies > kMaxDenseQubits) {
        throw Error(ErrorKind::Capacity, "magic_state: too many copies for dense form");
    }
    Eigen::VectorXcd ket(2);
    ket << 1.0, std::polar(1.0, M_PI / 4);
    ket /= std::sqrt(2.0);
    Eigen::MatrixXcd one = ket * ket.adjoint();
    Eigen::MatrixXcd rho = one;
    for (std::size_t k = 1; k < copies; ++k) {
        Eigen::MatrixXcd next(rho.rows() * 2, rho.cols() * 2);
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                next.block(2 * i, 2 * j, 2, 2) = rho(i, j) * one;
            }
        }
        rho = next;
    }
    return {rho, from_dense(rho)};
}

std::size_t QcmCircuit::num_measurements() const {
    std::size_t count = 0;
    for (const auto &op : ops) {
        count += std::holds_alternative<MeasureOp>(op);
    }
    return count;
}

void QcmCircuit::validate() const {
    if (magic > n) {
        throw Error(ErrorKind::Domain, "circuit: more magic qubits than qubits");
    }
    if (magic < n && stabilizer.num_qubits() != n - magic) {
        throw Error(ErrorKind::Domain, "circuit: stabilizer register has the wrong size");
    }
    std::size_t seen = 0;
    for (const auto &op : ops) {
        if (const auto *g = std::get_if<GateOp>(&op)) {
            if (g->gate.num_qubits() != n) {
                throw Error(ErrorKind::Dimension, "circuit: gate has the wrong qubit count");
            }
            for (auto k : g->control) {
                if (k >= seen) {
                    throw Error(ErrorKind::Domain, "circuit: control references a later measurement");
                }
            }
        } else {
            const auto &m = std::get<MeasureOp>(op);
            if (m.observable.n != n) {
                throw Error(ErrorKind::Dimension, "circuit: measurement has the wrong qubit count");
            }
            if (m.observable.is_identity()) {
                throw Error(ErrorKind::InvalidObservable, "circuit: identity is not a measurement");
            }
            ++seen;
        }
    }
}

Eigen::MatrixXcd QcmCircuit::initial_density() const {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
    if (magic > 0) {
        rho = magic_state(magic).dense;
    }
    if (magic < n) {
        Eigen::MatrixXcd b = to_dense(stabilizer.projector());
        Eigen::MatrixXcd out(rho.rows() * b.rows(), rho.cols() * b.cols());
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = rho(i, j) * b;
            }
        }
        rho = out;
    }
    return rho;
}

QcmCircuit circuit_from_json(const nlohmann::json &j) {
    try {
        QcmCircuit c;
        c.n = j.at("n").get<std::size_t>();
        c.magic = j.value("magic", std::size_t{0});
        if (c.n == 0 || c.n > kMaxDenseQubits || c.magic > c.n) {
            throw Error(ErrorKind::Format, "circuit: bad qubit counts");
        }
        std::size_t nb = c.n - c.magic;
        if (nb > 0) {
            std::vector<PauliIndex> gens;
            std::vector<int> signs;
            if (j.contains("stabilizer")) {
                for (const auto &g : j.at("stabilizer").at("generators")) {
                    gens.push_back(PauliIndex::from_string(g.get<std::string>()));
                }
                signs = j.at("stabilizer").at("signs").get<std::vector<int>>();
            } else {
                for (std::size_t k = 0; k < nb; ++k) {
                    gens.push_back(PauliIndex::single(nb, k, 'Z'));
                    signs.push_back(0);
                }
            }
            c.stabilizer = StabilizerState::from_generators(nb, gens, signs);
        }
        for (const auto &op : j.at("ops")) {
            if (op.contains("measure")) {
                c.ops.push_back(MeasureOp{PauliIndex::from_string(op.at("measure").get<std::string>()),
                                          op.value("sign", 0) & 1});
                continue;
            }
            GateOp g;
            if (op.contains("clifford")) {
                g.gate = CliffordElement::from_json(op.at("clifford"));
                g.label = "clifford";
            } else {
                g.label = op.at("gate").get<std::string>();
                g.gate = named_gate(c.n, g.label, op.at("qubits").get<std::vector<std::size_t>>());
            }
            if (op.contains("control")) {
                g.control = op.at("control").get<std::vector<std::size_t>>();
            }
            c.ops.push_back(std::move(g));
        }
        c.validate();
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("circuit: ") + e.what());
    }
}

nlohmann::json circuit_to_json(const QcmCircuit &c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["magic"] = c.magic;
    if (c.magic < c.n) {
        nlohmann::json s;
        s["generators"] = nlohmann::json::array();
        s["signs"] = nlohmann::json::array();
        const auto &sub = c.stabilizer.subspace();
        for (std::size_t k = 0; k < sub.basis.size(); ++k) {
            s["generators"].push_back(sub.basis[k].str());
            s["signs"].push_back(c.stabilizer.basis_values()[k]);
        }
        j["stabilizer"] = s;
    }
    j["ops"] = nlohmann::json::array();
    for (const auto &op : c.ops) {
        nlohmann::json o;
        if (const auto *g = std::get_if<GateOp>(&op)) {
            o["clifford"] = g->gate.to_json();
            if (!g->control.empty()) {
                o["control"] = g->control;
            }
        } else {
            const auto &m = std::get<MeasureOp>(op);
            o["measure"] = m.observable.str();
            o["sign"] = m.sign;
        }
        j["ops"].push_back(o);
    }
    return j;
}

bool Branch::operator==(const Branch &other) const {
    if (kind != other.kind) {
        return false;
    }
    switch (kind) {
        case Kind::Measure:
            return observable == other.observable && sign == other.sign;
        case Kind::Fixed:
            return value == other.value;
        case Kind::Coin:
            return true;
    }
    return false;
}

const Branch &ProgramStep::branch(const std::string &earlier_outcomes) const {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < depends_on.size(); ++k) {
        if (depends_on[k] >= earlier_outcomes.size()) {
            throw Error(ErrorKind::Domain, "program: step depends on a later outcome");
        }
        if (earlier_outcomes[depends_on[k]] == '1') {
            key |= std::uint64_t{1} << k;
        }
    }
    return table.at(key);
}

std::size_t MeasurementProgram::measurement_count() const {
    std::size_t count = 0;
    for (const auto &s : steps) {
        for (const auto &[key, b] : s.table) {
            if (b.kind == Branch::Kind::Measure) {
                ++count;
                break;
            }
        }
    }
    return count;
}

nlohmann::json program_to_json(const MeasurementProgram &p) {
    nlohmann::json j;
    j["n"] = p.n;
    j["convention"] = kPhaseConventionId;
    j["steps"] = nlohmann::json::array();
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const auto &s = p.steps[k];
        nlohmann::json rec;
        rec["step"] = k;
        rec["depends_on"] = s.depends_on;
        rec["branches"] = nlohmann::json::array();
        for (const auto &[key, b] : s.table) {
            nlohmann::json br;
            br["key"] = prefix_of(key, s.depends_on.size());
            switch (b.kind) {
                case Branch::Kind::Measure:
                    br["kind"] = "measure";
                    br["pauli"] = b.observable.str();
                    br["sign"] = b.sign;
                    break;
                case Branch::Kind::Fixed:
                    br["kind"] = "fixed";
                    br["value"] = b.value;
                    break;
                case Branch::Kind::Coin:
                    br["kind"] = "coin";
                    break;
            }
            rec["branches"].push_back(br);
        }
        j["steps"].push_back(rec);
    }
    return j;
}

MeasurementProgram program_from_json(const nlohmann::json &j) {
    try {
        if (j.at("convention").get<std::string>() != kPhaseConventionId) {
            throw Error(ErrorKind::ConventionMismatch, "program: phase convention differs");
        }
        MeasurementProgram p;
        p.n = j.at("n").get<std::size_t>();
        for (const auto &rec : j.at("steps")) {
            ProgramStep s;
            s.depends_on = rec.at("depends_on").get<std::vector<std::size_t>>();
            for (auto d : s.depends_on) {
                if (d >= p.steps.size()) {
                    throw Error(ErrorKind::Format, "program: dependency on a later step");
                }
            }
            for (const auto &br : rec.at("branches")) {
                std::string key = br.at("key").get<std::string>();
                if (key.size() != s.depends_on.size()) {
                    throw Error(ErrorKind::Format, "program: branch key length mismatch");
                }
                std::uint64_t bits = 0;
                for (std::size_t k = 0; k < key.size(); ++k) {
                    if (key[k] == '1') {
                        bits |= std::uint64_t{1} << k;
                    }
                }
                Branch b;
                std::string kind = br.at("kind").get<std::string>();
                if (kind == "measure") {
                    b.kind = Branch::Kind::Measure;
                    b.observable = PauliIndex::from_string(br.at("pauli").get<std::string>());
                    b.sign = br.at("sign").get<int>() & 1;
                    if (b.observable.n != p.n || b.observable.is_identity()) {
                        throw Error(ErrorKind::Format, "program: bad observable");
                    }
                } else if (kind == "fixed") {
                    b.kind = Branch::Kind::Fixed;
                    b.value = br.at("value").get<int>() & 1;
                } else if (kind == "coin") {
                    b.kind = Branch::Kind::Coin;
                } else {
                    throw Error(ErrorKind::Format, "program: unknown branch kind " + kind);
                }
                s.table[bits] = b;
            }
            if (s.table.size() != (std::size_t{1} << s.depends_on.size())) {
                throw Error(ErrorKind::Format, "program: incomplete branch table");
            }
            p.steps.push_back(std::move(s));
        }
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("program: ") + e.what());
    }
}

MeasurementProgram propagate_cliffords(const QcmCircuit &c) {
    c.validate();
    MeasurementProgram prog;
    prog.n = c.n;
    std::size_t j = 0;
    for (std::size_t pos = 0; pos < c.ops.size(); ++pos) {
        const auto *m = std::get_if<MeasureOp>(&c.ops[pos]);
        if (!m) {
            continue;
        }
        prog.steps.push_back(tabulate(j, [&](const std::string &prefix) {
            CliffordElement u = CliffordElement::identity(c.n);
            for (std::size_t q = 0; q < pos; ++q) {
                const auto *g = std::get_if<GateOp>(&c.ops[q]);
                if (g && (g->control.empty() || parity_of(g->control, prefix))) {
                    u = g->gate.compose(u);
                }
            }
            SignedPauli back = u.inverse().conjugate(SignedPauli{m->observable, m->sign});
            Branch b;
            b.kind = Branch::Kind::Measure;
            b.observable = back.index;
            b.sign = back.sign;
            return b;
        }));
        ++j;
    }
    return prog;
}

MeasurementProgram eliminate_stabilizer_register(const MeasurementProgram &prog, std::size_t keep,
                                                 const StabilizerState &register_state) {
    if (keep > prog.n) {
        throw Error(ErrorKind::Domain, "eliminate: register split out of range");
    }
    if (keep == prog.n) {
        return prog;
    }
    if (register_state.num_qubits() != prog.n - keep || register_state.subspace().basis.size() != prog.n - keep) {
        throw Error(ErrorKind::Domain, "eliminate: register is not in a stabilizer state of the right size");
    }
    const auto &basis = register_state.subspace().basis;
    MeasurementProgram out;
    out.n = keep;
    // Per full outcome prefix: compensating reflections applied so far.
    std::map<std::string, std::vector<CliffordElement>> history{{"", {}}};
    std::vector<std::map<std::string, Branch>> decided(prog.steps.size());
    for (std::size_t j = 0; j < prog.steps.size(); ++j) {
        std::map<std::string, std::vector<CliffordElement>> next;
        for (const auto &[prefix, ws] : history) {
            const Branch &in = prog.steps[j].branch(prefix);
            Branch b = in;
            std::vector<CliffordElement> w0 = ws, w1 = ws;
            if (in.kind == Branch::Kind::Measure) {
                if (in.observable.n != prog.n) {
                    throw Error(ErrorKind::Dimension, "eliminate: observable has the wrong qubit count");
                }
                SignedPauli m{in.observable, in.sign};
                // Reflections act oldest first: the effective observable is
                // W_1 ... W_k M W_k ... W_1.
                for (const auto &w : ws) {
                    m = w.conjugate(m);
                }
                PauliIndex r = restrict_high(m.index, keep);
                PauliIndex s = restrict_low(m.index, keep);
                std::optional<std::size_t> anti;
                for (std::size_t k = 0; k < basis.size() && !anti; ++k) {
                    if (symplectic_form(basis[k], r) != 0) {
                        anti = k;
                    }
                }
                if (!anti) {
                    // Case I: T_R acts on the register as (-1)^lambda.
                    int sign = m.sign ^ register_state.value(r);
                    if (s.is_identity()) {
                        b = Branch{Branch::Kind::Fixed, PauliIndex::identity(keep), 0, sign};
                    } else {
                        b = Branch{Branch::Kind::Measure, s, sign, 0};
                    }
                } else {
                    // Case II: uniformly random; the post-measurement state is
                    // W rho W with W = (G + O_r)/sqrt(2).
                    b = Branch{Branch::Kind::Coin, PauliIndex::identity(keep), 0, 0};
                    SignedPauli g{embed_high(basis[*anti], keep), register_state.basis_values()[*anti]};
                    w0.push_back(CliffordElement::pauli_reflection(g, SignedPauli{m.index, m.sign}));
                    w1.push_back(CliffordElement::pauli_reflection(g, SignedPauli{m.index, m.sign ^ 1}));
                }
            } else if (in.kind == Branch::Kind::Measure) {
                b.observable = restrict_low(in.observable, keep);
            }
            decided[j][prefix] = b;
            next[prefix + '0'] = std::move(w0);
            next[prefix + '1'] = std::move(w1);
        }
        history = std::move(next);
        out.steps.push_back(tabulate(j, [&](const std::string &prefix) { return decided[j].at(prefix); }));
    }
    return out;
}

MeasurementProgram compile(const QcmCircuit &c) {
    MeasurementProgram prog = propagate_cliffords(c);
    if (c.magic == c.n) {
        return prog;
    }
    return eliminate_stabilizer_register(prog, c.magic, c.stabilizer);
}

void append_t_gadget(QcmCircuit &c, std::size_t data, std::size_t magic) {
    if (data >= c.n || magic >= c.n || data == magic) {
        throw Error(ErrorKind::Domain, "t_gadget: bad qubits");
    }
    std::size_t k = c.num_measurements();
    c.ops.push_back(GateOp{CliffordElement::cnot(c.n, magic, data), {}, "CNOT"});
    c.ops.push_back(MeasureOp{PauliIndex::single(c.n, data, 'Z'), 0});
    c.ops.push_back(GateOp{CliffordElement::pauli(PauliIndex::single(c.n, magic, 'X')), {k}, "X"});
    c.ops.push_back(GateOp{CliffordElement::phase(c.n, magic), {k}, "S"});
}

Distribution simulate_circuit_oracle(const QcmCircuit &c) {
    c.validate();
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> frontier{{"", c.initial_density()}};
    for (const auto &op : c.ops) {
        if (const auto *g = std::get_if<GateOp>(&op)) {
            Eigen::MatrixXcd u = clifford_unitary(g->gate);
            for (auto &[prefix, rho] : frontier) {
                if (g->control.empty() || parity_of(g->control, prefix)) {
                    rho = u * rho * u.adjoint();
                }
            }
            continue;
        }
        const auto &m = std::get<MeasureOp>(op);
        Eigen::MatrixXcd pis[2] = {measurement_projector(m.observable, m.sign),
                                   measurement_projector(m.observable, m.sign ^ 1)};
        std::vector<std::pair<std::string, Eigen::MatrixXcd>> next;
        for (const auto &[prefix, rho] : frontier) {
            for (int r = 0; r < 2; ++r) {
                next.emplace_back(prefix + char('0' + r), pis[r] * rho * pis[r]);
            }
        }
        frontier = std::move(next);
    }
    Distribution out;
    for (const auto &[prefix, rho] : frontier) {
        out[prefix] = std::clamp(rho.trace().real(), 0.0, 1.0);
    }
    return out;
}

Distribution evaluate_program_oracle(const MeasurementProgram &prog, const Eigen::MatrixXcd &rho) {
    if (rho.rows() != (Eigen::Index{1} << prog.n)) {
        throw Error(ErrorKind::Dimension, "evaluate_program_oracle: state size mismatch");
    }
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> frontier{{"", rho}};
    for (const auto &step : prog.steps) {
        std::vector<std::pair<std::string, Eigen::MatrixXcd>> next;
        for (const auto &[prefix, r] : frontier) {
            const Branch &b = step.branch(prefix);
            switch (b.kind) {
                case Branch::Kind::Fixed:
                    next.emplace_back(prefix + char('0' + b.value), r);
                    next.emplace_back(prefix + char('1' - b.value), Eigen::MatrixXcd::Zero(r.rows(), r.cols()));
                    break;
                case Branch::Kind::Coin:
                    next.emplace_back(prefix + '0', 0.5 * r);
                    next.emplace_back(prefix + '1', 0.5 * r);
                    break;
                case Branch::Kind::Measure:
                    for (int out = 0; out < 2; ++out) {
                        Eigen::MatrixXcd pi = measurement_projector(b.observable, out ^ b.sign);
                        next.emplace_back(prefix + char('0' + out), pi * r * pi);
                    }
                    break;
            }
        }
        frontier = std::move(next);
    }
    Distribution out;
    for (const auto &[prefix, r] : frontier) {
        out[prefix] = std::clamp(r.trace().real(), 0.0, 1.0);
    }
    return out;
}

Distribution evaluate_program_exact(const MeasurementProgram &prog, const ProbVector &p, KernelCache &cache) {
    Distribution out;
    if (p.exact) {
        for (const auto &[k, v] : run_program<Rational>(prog, p, cache)) {
            out[k] = v.get_d();
        }
    } else {
        out = run_program<double>(prog, p, cache);
    }
    return out;
}

StatisticsReport sample_program(const MeasurementProgram &prog, const ProbVector &p, std::uint64_t trials,
                                std::uint64_t seed, KernelCache &cache, std::size_t threads) {
    if (trials == 0) {
        throw Error(ErrorKind::Domain, "sample_program: need at least one trial");
    }
    if (p.dictionary_hash != cache.dictionary_hash() || cache.dictionary().n != prog.n) {
        throw Error(ErrorKind::Domain, "program: probability vector or dictionary does not match the program");
    }
    threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, trials));
    std::vector<std::map<std::string, std::uint64_t>> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](std::size_t w) {
        try {
            for (std::uint64_t j = w; j < trials; j += threads) {
                CounterRng rng(seed, j);
                std::size_t alpha = sample_vertex(p, rng);
                std::string outcomes;
                for (const auto &step : prog.steps) {
                    const Branch &b = step.branch(outcomes);
                    int r = 0;
                    if (b.kind == Branch::Kind::Fixed) {
                        r = b.value;
                    } else if (b.kind == Branch::Kind::Coin) {
                        r = rng.uniform() < 0.5 ? 0 : 1;
                    } else {
                        auto [beta, s] = sample_transition(cache.get(alpha, b.observable), rng);
                        alpha = beta;
                        r = s ^ b.sign;
                    }
                    outcomes.push_back(char('0' + r));
                }
                ++partial[w][outcomes];
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < threads; ++w) {
        pool.emplace_back(work, w);
    }
    work(0);
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::map<std::string, std::uint64_t> counts;
    for (const auto &s : all_prefixes(prog.steps.size())) {
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

double last_outcome_zero(const Distribution &d) {
    double total = 0;
    for (const auto &[k, v] : d) {
        if (!k.empty() && k.back() == '0') {
            total += v;
        }
    }
    return total;
}

}  // namespace qhvm
