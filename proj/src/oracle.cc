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

#include <algorithm>
#include <cmath>
#include <set>

namespace qhvm {

namespace {

void check_dims(const Eigen::MatrixXcd &rho, const PauliIndex &a) {
    if (rho.rows() != (Eigen::Index{1} << a.n) || rho.cols() != rho.rows()) {
        throw Error(ErrorKind::Dimension, "oracle: matrix size does not match the Pauli index");
    }
}

}  // namespace

double min_eigenvalue(const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXcd &m, double tolerance) {
    return min_eigenvalue(m) >= -tolerance;
}

void validate_density_matrix(const Eigen::MatrixXcd &rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0 || (rho.rows() & (rho.rows() - 1)) != 0) {
        throw Error(ErrorKind::Dimension, "density matrix must be 2^n x 2^n");
    }
    if (rho.rows() > (Eigen::Index{1} << kMaxDenseQubits)) {
        throw Error(ErrorKind::Capacity, "density matrix exceeds the dense qubit cap");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - std::complex<double>(1, 0)) > 1e-12) {
        throw Error(ErrorKind::InvalidState, "density matrix does not have unit trace");
    }
    if (!is_psd(rho)) {
        throw Error(ErrorKind::InvalidState, "density matrix has a negative eigenvalue");
    }
}

Eigen::MatrixXcd ket_to_density(const Eigen::VectorXcd &ket) {
    Eigen::VectorXcd v = ket.normalized();
    return v * v.adjoint();
}

Eigen::VectorXcd ket_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorKind::Format, "ket: expected a nonempty amplitude list");
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_array() || j[k].size() != 2) {
            throw Error(ErrorKind::Format, "ket: amplitudes are [re, im] pairs");
        }
        v(static_cast<Eigen::Index>(k)) = {j[k][0].get<double>(), j[k][1].get<double>()};
    }
    if ((v.size() & (v.size() - 1)) != 0) {
        throw Error(ErrorKind::Dimension, "ket: length is not a power of two");
    }
    if (v.norm() == 0) {
        throw Error(ErrorKind::InvalidState, "ket: zero vector");
    }
    return v.normalized();
}

Eigen::MatrixXcd measurement_projector(const PauliIndex &a, int s) {
    if (a.is_identity()) {
        throw Error(ErrorKind::InvalidObservable, "measurement of the identity");
    }
    Eigen::MatrixXcd t = pauli_matrix(a);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
    return 0.5 * (id + ((s & 1) ? -1.0 : 1.0) * t);
}

double born_probability(const Eigen::MatrixXcd &rho, const PauliIndex &a, int s) {
    check_dims(rho, a);
    double p = (measurement_projector(a, s) * rho).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

Eigen::MatrixXcd post_measurement_state(const Eigen::MatrixXcd &rho, const PauliIndex &a, int s) {
    check_dims(rho, a);
    Eigen::MatrixXcd pi = measurement_projector(a, s);
    Eigen::MatrixXcd out = pi * rho * pi;
    double p = out.trace().real();
    if (p <= 1e-12) {
        throw Error(ErrorKind::InvalidState, "post-measurement state of a zero-probability outcome");
    }
    return out / p;
}

Distribution joint_distribution(const Eigen::MatrixXcd &rho, const std::vector<PauliIndex> &sequence) {
    if (sequence.size() > 24) {
        throw Error(ErrorKind::Capacity, "joint_distribution: sequence too long");
    }
    Distribution out;
    // Unnormalized branches: Pi_k ... Pi_1 rho Pi_1 ... Pi_k.
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> frontier{{"", rho}};
    for (const auto &a : sequence) {
        check_dims(rho, a);
        Eigen::MatrixXcd pis[2] = {measurement_projector(a, 0), measurement_projector(a, 1)};
        std::vector<std::pair<std::string, Eigen::MatrixXcd>> next;
        for (const auto &[prefix, branch] : frontier) {
            for (int s = 0; s < 2; ++s) {
                next.emplace_back(prefix + char('0' + s), pis[s] * branch * pis[s]);
            }
        }
        frontier = std::move(next);
    }
    for (const auto &[key, branch] : frontier) {
        out[key] = std::clamp(branch.trace().real(), 0.0, 1.0);
    }
    return out;
}

double total_variation(const Distribution &p, const Distribution &q) {
    std::set<std::string> keys;
    std::size_t len = std::string::npos;
    for (const auto *d : {&p, &q}) {
        for (const auto &[k, v] : *d) {
            if (len == std::string::npos) {
                len = k.size();
            } else if (k.size() != len) {
                throw Error(ErrorKind::Domain, "total_variation: outcome alphabets differ");
            }
            keys.insert(k);
        }
    }
    double sum = 0;
    for (const auto &k : keys) {
        auto pi = p.find(k);
        auto qi = q.find(k);
        sum += std::fabs((pi == p.end() ? 0.0 : pi->second) - (qi == q.end() ? 0.0 : qi->second));
    }
    return sum / 2;
}

Eigen::MatrixXcd apply_clifford(const Eigen::MatrixXcd &rho, const CliffordElement &g) {
    Eigen::MatrixXcd u = clifford_unitary(g);
    if (u.rows() != rho.rows()) {
        throw Error(ErrorKind::Dimension, "apply_clifford: size mismatch");
    }
    return u * rho * u.adjoint();
}

}  // namespace qhvm
