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

#include "qhvm/pauli.h"

#include <complex>

namespace qhvm {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Dimension:
            return "dimension";
        case ErrorKind::Domain:
            return "domain";
        case ErrorKind::InvalidObservable:
            return "invalid-observable";
        case ErrorKind::InvalidState:
            return "invalid-state";
        case ErrorKind::Capacity:
            return "capacity";
        case ErrorKind::Budget:
            return "budget";
        case ErrorKind::Infeasible:
            return "infeasible";
        case ErrorKind::Format:
            return "format";
        case ErrorKind::ConventionMismatch:
            return "convention-mismatch";
        case ErrorKind::Internal:
            return "internal";
    }
    return "unknown";
}

namespace {

std::uint64_t low_mask(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_qubits(std::size_t n) {
    if (n > kMaxQubits) {
        throw Error(ErrorKind::Capacity, "PauliIndex: at most 32 qubits");
    }
}

// Exponent g with P(x1,z1) P(x2,z2) = i^g P(x1^x2, z1^z2) for single-qubit
// Paulis I, X, Y, Z.
int single_qubit_phase(int x1, int z1, int x2, int z2) {
    if (x1 == 0 && z1 == 0) {
        return 0;
    }
    if (x1 == 1 && z1 == 1) {
        return z2 - x2;
    }
    if (x1 == 1) {
        return z2 * (2 * x2 - 1);
    }
    return x2 * (1 - 2 * z2);
}

}  // namespace

PauliIndex PauliIndex::identity(std::size_t n) {
    check_qubits(n);
    return PauliIndex{n, 0, 0};
}

PauliIndex PauliIndex::single(std::size_t n, std::size_t qubit, char pauli) {
    check_qubits(n);
    if (qubit >= n) {
        throw Error(ErrorKind::Dimension, "PauliIndex::single: qubit out of range");
    }
    PauliIndex out{n, 0, 0};
    std::uint64_t bit = std::uint64_t{1} << qubit;
    switch (pauli) {
        case 'I':
        case '_':
            break;
        case 'X':
            out.x = bit;
            break;
        case 'Y':
            out.x = bit;
            out.z = bit;
            break;
        case 'Z':
            out.z = bit;
            break;
        default:
            throw Error(ErrorKind::Format, std::string("unknown Pauli letter '") + pauli + "'");
    }
    return out;
}

PauliIndex PauliIndex::from_string(const std::string &text) {
    std::size_t n = text.size();
    check_qubits(n);
    PauliIndex out{n, 0, 0};
    for (std::size_t k = 0; k < n; ++k) {
        PauliIndex q = single(n, k, text[k]);
        out.x |= q.x;
        out.z |= q.z;
    }
    return out;
}

PauliIndex PauliIndex::from_packed(std::size_t n, std::uint64_t key) {
    check_qubits(n);
    if (n < 32 && (key >> (2 * n)) != 0) {
        throw Error(ErrorKind::Dimension, "PauliIndex::from_packed: key out of range");
    }
    return PauliIndex{n, key & low_mask(n), (key >> n) & low_mask(n)};
}

char PauliIndex::qubit_pauli(std::size_t k) const {
    int xb = (x >> k) & 1;
    int zb = (z >> k) & 1;
    return "IZXY"[2 * xb + zb];
}

std::string PauliIndex::str() const {
    std::string out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(qubit_pauli(k));
    }
    return out;
}

std::string PauliIndex::hex() const {
    std::size_t digits = std::max<std::size_t>(1, (2 * n + 3) / 4);
    std::uint64_t key = packed();
    std::string raw;
    for (std::size_t d = 0; d < digits; ++d) {
        raw.push_back("0123456789abcdef"[(key >> (4 * (digits - 1 - d))) & 0xf]);
    }
    return raw;
}

PauliIndex PauliIndex::from_hex(std::size_t n, const std::string &hex) {
    if (hex.empty() || hex.size() > 16) {
        throw Error(ErrorKind::Format, "bad Pauli index hex '" + hex + "'");
    }
    std::uint64_t key = 0;
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9') {
            v = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            v = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            v = c - 'A' + 10;
        } else {
            throw Error(ErrorKind::Format, "bad Pauli index hex '" + hex + "'");
        }
        key = (key << 4) | static_cast<std::uint64_t>(v);
    }
    try {
        return from_packed(n, key);
    } catch (const Error &) {
        throw Error(ErrorKind::Format, "Pauli index hex '" + hex + "' out of range");
    }
}

PauliIndex add_indices(const PauliIndex &a, const PauliIndex &b) {
    if (a.n != b.n) {
        throw Error(ErrorKind::Dimension, "add_indices: qubit count mismatch");
    }
    return PauliIndex{a.n, a.x ^ b.x, a.z ^ b.z};
}

PauliIndex operator+(const PauliIndex &a, const PauliIndex &b) {
    return add_indices(a, b);
}

int symplectic_form(const PauliIndex &a, const PauliIndex &b) {
    if (a.n != b.n) {
        throw Error(ErrorKind::Dimension, "symplectic_form: qubit count mismatch");
    }
    return (std::popcount(a.z & b.x) + std::popcount(b.z & a.x)) & 1;
}

int product_phase(const PauliIndex &a, const PauliIndex &b) {
    if (a.n != b.n) {
        throw Error(ErrorKind::Dimension, "product_phase: qubit count mismatch");
    }
    int total = 0;
    std::uint64_t support = (a.x | a.z) & (b.x | b.z);
    while (support) {
        int k = std::countr_zero(support);
        support &= support - 1;
        total += single_qubit_phase((a.x >> k) & 1, (a.z >> k) & 1, (b.x >> k) & 1, (b.z >> k) & 1);
    }
    return ((total % 4) + 4) % 4;
}

int commuting_product_sign(const PauliIndex &a, const PauliIndex &b) {
    int beta = product_phase(a, b);
    if (beta & 1) {
        throw Error(ErrorKind::Domain, "commuting_product_sign: indices anticommute");
    }
    return beta / 2;
}

Eigen::MatrixXcd pauli_matrix(const PauliIndex &a) {
    std::size_t n = a.n;
    if (n > kMaxDenseQubits) {
        throw Error(ErrorKind::Capacity, "pauli_matrix: beyond the dense qubit cap");
    }
    // Dense basis bit (n-1-k) belongs to qubit k.
    std::uint64_t xd = 0;
    std::uint64_t zd = 0;
    for (std::size_t k = 0; k < n; ++k) {
        xd |= ((a.x >> k) & 1) << (n - 1 - k);
        zd |= ((a.z >> k) & 1) << (n - 1 - k);
    }
    static const std::complex<double> powers_of_i[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> phase = powers_of_i[std::popcount(a.x & a.z) & 3];
    std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t col = 0; col < dim; ++col) {
        double sign = (std::popcount(zd & col) & 1) ? -1.0 : 1.0;
        out(col ^ xd, col) = sign * phase;
    }
    return out;
}

RealOp to_real(const ExactOp &op) {
    RealOp out(op.num_qubits());
    for (const auto &[key, c] : op.terms()) {
        out.set(PauliIndex::from_packed(op.num_qubits(), key), c.get_d());
    }
    return out;
}

ExactOp to_exact(const RealOp &op) {
    ExactOp out(op.num_qubits());
    for (const auto &[key, c] : op.terms()) {
        out.set(PauliIndex::from_packed(op.num_qubits(), key), rational_from_double(c));
    }
    return out;
}

ExactOp projector(const PauliIndex &a, int s) {
    if (a.is_identity()) {
        throw Error(ErrorKind::InvalidObservable, "projector: the identity is not an observable");
    }
    ExactOp out(a.n);
    out.set(PauliIndex::identity(a.n), Rational(1, 2));
    out.set(a, (s & 1) ? Rational(-1, 2) : Rational(1, 2));
    return out;
}

RealOp from_dense(const Eigen::MatrixXcd &matrix) {
    std::size_t dim = static_cast<std::size_t>(matrix.rows());
    if (matrix.cols() != matrix.rows() || dim == 0 || (dim & (dim - 1)) != 0) {
        throw Error(ErrorKind::Dimension, "from_dense: matrix must be 2^n x 2^n");
    }
    std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > kMaxDenseQubits) {
        throw Error(ErrorKind::Capacity, "from_dense: beyond the dense qubit cap");
    }
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw Error(ErrorKind::Domain, "from_dense: matrix is not Hermitian");
    }
    RealOp out(n);
    double inv_dim = 1.0 / static_cast<double>(dim);
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << (2 * n)); ++key) {
        PauliIndex a = PauliIndex::from_packed(n, key);
        std::complex<double> tr = (pauli_matrix(a) * matrix).trace();
        out.set(a, tr.real() * inv_dim);
    }
    return out;
}

nlohmann::json op_to_json(const ExactOp &op) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[key, c] : op.terms()) {
        PauliIndex a = PauliIndex::from_packed(op.num_qubits(), key);
        terms.push_back({a.hex(), c.get_num().get_str(), c.get_den().get_str()});
    }
    return {{"n", op.num_qubits()}, {"convention", kPhaseConventionId}, {"terms", terms}};
}

ExactOp op_from_json(const nlohmann::json &j) {
    try {
        std::string convention = j.at("convention").get<std::string>();
        if (convention != kPhaseConventionId) {
            throw Error(ErrorKind::ConventionMismatch,
                        "operator uses phase convention '" + convention + "', expected '" +
                            kPhaseConventionId + "'");
        }
        std::size_t n = j.at("n").get<std::size_t>();
        ExactOp out(n);
        for (const auto &term : j.at("terms")) {
            if (!term.is_array() || term.size() != 3) {
                throw Error(ErrorKind::Format, "operator term must be [hex, numerator, denominator]");
            }
            PauliIndex a = PauliIndex::from_hex(n, term[0].get<std::string>());
            mpz_class num(term[1].get<std::string>());
            mpz_class den(term[2].get<std::string>());
            if (den == 0) {
                throw Error(ErrorKind::Format, "operator term has zero denominator");
            }
            Rational c(num, den);
            c.canonicalize();
            out.add(a, c);
        }
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("malformed operator record: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw Error(ErrorKind::Format, std::string("malformed operator number: ") + e.what());
    }
}

}  // namespace qhvm
