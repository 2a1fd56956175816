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


#ifndef QHVM_QCM_H
#define QHVM_QCM_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qhvm/clifford.h"
#include "qhvm/oracle.h"
#include "qhvm/simulator.h"
#include "qhvm/stabilizer.h"

namespace qhvm {

struct MagicState {
    Eigen::MatrixXcd dense;
    RealOp op;
};

/// (|T><T|)^{(x) k} with |T> = (|0> + e^{i pi/4}|1>)/sqrt(2).
MagicState magic_state(std::size_t copies);

struct GateOp {
    CliffordElement gate;
    /// Applied iff the parity of these earlier measurement outcomes is 1.
    std::vector<std::size_t> control;
    std::string label;
};

struct MeasureOp {
    /// Measures (-1)^sign T_observable.
    PauliIndex observable;
    int sign = 0;
};

using CircuitOp = std::variant<GateOp, MeasureOp>;

/// Qubits [0, magic) start in |T>; qubits [magic, n) form the stabilizer
/// register, initialized in `stabilizer`.
struct QcmCircuit {
    std::size_t n = 0;
    std::size_t magic = 0;
    StabilizerState stabilizer;
    std::vector<CircuitOp> ops;

    std::size_t num_measurements() const;
    /// Throws Domain if a control references a later measurement.
    void validate() const;
    Eigen::MatrixXcd initial_density() const;
};

/// Builds a circuit from JSON. Gates are {"gate": name, "qubits": [...]}
/// with names H, S, SDG, X, Y, Z, CNOT, CZ, SWAP, or {"clifford": {...}};
/// optional "control": [measurement indices]. Measurements are
/// {"measure": "XZ", "sign": 0}. Non-Clifford names are rejected.
QcmCircuit circuit_from_json(const nlohmann::json &j);
nlohmann::json circuit_to_json(const QcmCircuit &c);

struct Branch {
    enum class Kind { Measure, Fixed, Coin };
    Kind kind = Kind::Measure;
    PauliIndex observable;
    int sign = 0;
    int value = 0;

    bool operator==(const Branch &other) const;
};

/// One circuit measurement. Its branch is chosen by the outcomes of the
/// steps in `depends_on` (bit k of the key is the outcome of depends_on[k]).
struct ProgramStep {
    std::vector<std::size_t> depends_on;
    std::map<std::uint64_t, Branch> table;

    const Branch &branch(const std::string &earlier_outcomes) const;
};

struct MeasurementProgram {
    std::size_t n = 0;
    std::vector<ProgramStep> steps;

    std::size_t measurement_count() const;
};

nlohmann::json program_to_json(const MeasurementProgram &p);
MeasurementProgram program_from_json(const nlohmann::json &j);

/// Heisenberg picture: measurement k becomes U_k^dagger O_k U_k for the
/// (outcome dependent) Clifford U_k applied before it. Trailing gates are
/// dropped.
MeasurementProgram propagate_cliffords(const QcmCircuit &c);

/// Removes qubits [keep, n), which start in `register_state`. Case I
/// measurements act as +-S_A or become fixed outcomes; Case II
/// measurements become coins and later observables are conjugated by the
/// compensating reflection.
MeasurementProgram eliminate_stabilizer_register(const MeasurementProgram &prog, std::size_t keep,
                                                 const StabilizerState &register_state);

/// propagate_cliffords followed by elimination of the stabilizer register.
MeasurementProgram compile(const QcmCircuit &c);

/// Appends the gadget for exp(-i pi/8 Z) on `data`, consuming the |T>
/// qubit `magic`. The logical qubit continues on `magic`.
void append_t_gadget(QcmCircuit &c, std::size_t data, std::size_t magic);

Distribution simulate_circuit_oracle(const QcmCircuit &c);
Distribution evaluate_program_oracle(const MeasurementProgram &prog, const Eigen::MatrixXcd &rho);
Distribution evaluate_program_exact(const MeasurementProgram &prog, const ProbVector &p, KernelCache &cache);
StatisticsReport sample_program(const MeasurementProgram &prog, const ProbVector &p, std::uint64_t trials,
                                std::uint64_t seed, KernelCache &cache, std::size_t threads = 1);

/// Probability that the last outcome is 0.
double last_outcome_zero(const Distribution &d);

}  // namespace qhvm

#endif
