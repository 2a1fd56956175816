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


#include "qhvm/clifford.h"

#include <bit>
#include <cmath>

namespace qhvm {

namespace {

PauliIndex basis_vector(std::size_t n, std::size_t k) {
    return PauliIndex::from_packed(n, std::uint64_t{1} << k);
}

// Returns (phase mod 4, index) of i^{phase} T_index = T_p T_q accumulated
// onto an existing phase.
void accumulate(int &phase, PauliIndex &cur, const SignedPauli &factor) {
    phase = (phase + 2 * factor.sign + product_phase(cur, factor.index)) & 3;
    cur = cur + factor.index;
}

SignedPauli hermitian_result(int phase, const PauliIndex &index) {
    if (phase & 1) {
        throw Error(ErrorKind::Internal, "clifford: product is not Hermitian");
    }
    return {index, phase >> 1};
}

}  // namespace

SignedPauli multiply_commuting(const SignedPauli &p, const SignedPauli &q) {
    if (symplectic_form(p.index, q.index) != 0) {
        throw Error(ErrorKind::Domain, "multiply_commuting: factors anticommute");
    }
    int phase = 2 * p.sign;
    PauliIndex cur = p.index;
    accumulate(phase, cur, q);
    return hermitian_result(phase, cur);
}

CliffordElement CliffordElement::identity(std::size_t n) {
    CliffordElement g;
    g.n_ = n;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        g.images_.push_back({basis_vector(n, k), 0});
    }
    return g;
}

CliffordElement CliffordElement::from_images(std::size_t n, std::vector<SignedPauli> images) {
    if (images.size() != 2 * n) {
        throw Error(ErrorKind::Dimension, "CliffordElement: need 2n images");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].index.n != n) {
            throw Error(ErrorKind::Dimension, "CliffordElement: image has wrong qubit count");
        }
        images[i].sign &= 1;
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            if (symplectic_form(images[i].index, images[j].index) !=
                symplectic_form(basis_vector(n, i), basis_vector(n, j))) {
                throw Error(ErrorKind::Domain, "CliffordElement: images do not preserve the symplectic form");
            }
        }
    }
    CliffordElement g;
    g.n_ = n;
    g.images_ = std::move(images);
    return g;
}

CliffordElement CliffordElement::from_action(std::size_t n,
                                             const std::function<SignedPauli(const PauliIndex &)> &action) {
    std::vector<SignedPauli> images;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        images.push_back(action(basis_vector(n, k)));
    }
    return from_images(n, std::move(images));
}

CliffordElement CliffordElement::hadamard(std::size_t n, std::size_t q) {
    CliffordElement g = identity(n);
    std::swap(g.images_[q], g.images_[n + q]);
    return g;
}

CliffordElement CliffordElement::phase(std::size_t n, std::size_t q) {
    CliffordElement g = identity(n);
    g.images_[q] = {PauliIndex::single(n, q, 'Y'), 0};
    return g;
}

CliffordElement CliffordElement::phase_dagger(std::size_t n, std::size_t q) {
    CliffordElement g = identity(n);
    g.images_[q] = {PauliIndex::single(n, q, 'Y'), 1};
    return g;
}

CliffordElement CliffordElement::cnot(std::size_t n, std::size_t control, std::size_t target) {
    if (control == target) {
        throw Error(ErrorKind::Domain, "cnot: control equals target");
    }
    CliffordElement g = identity(n);
    g.images_[control] = {PauliIndex::single(n, control, 'X') + PauliIndex::single(n, target, 'X'), 0};
    g.images_[n + target] = {PauliIndex::single(n, control, 'Z') + PauliIndex::single(n, target, 'Z'), 0};
    return g;
}

CliffordElement CliffordElement::cz(std::size_t n, std::size_t a, std::size_t b) {
    if (a == b) {
        throw Error(ErrorKind::Domain, "cz: qubits coincide");
    }
    CliffordElement g = identity(n);
    g.images_[a] = {PauliIndex::single(n, a, 'X') + PauliIndex::single(n, b, 'Z'), 0};
    g.images_[b] = {PauliIndex::single(n, b, 'X') + PauliIndex::single(n, a, 'Z'), 0};
    return g;
}

CliffordElement CliffordElement::swap(std::size_t n, std::size_t a, std::size_t b) {
    CliffordElement g = identity(n);
    std::swap(g.images_[a], g.images_[b]);
    std::swap(g.images_[n + a], g.images_[n + b]);
    return g;
}

CliffordElement CliffordElement::pauli(const PauliIndex &p) {
    CliffordElement g = identity(p.n);
    for (auto &img : g.images_) {
        img.sign = symplectic_form(p, img.index);
    }
    return g;
}

CliffordElement CliffordElement::pauli_reflection(const SignedPauli &g, const SignedPauli &o) {
    if (symplectic_form(g.index, o.index) != 1) {
        throw Error(ErrorKind::Domain, "pauli_reflection: operators must anticommute");
    }
    std::size_t n = g.index.n;
    return from_action(n, [&](const PauliIndex &e) -> SignedPauli {
        int cg = symplectic_form(e, g.index);
        int co = symplectic_form(e, o.index);
        if (cg == co) {
            return {e, cg};
        }
        int phase = 2 * cg;
        PauliIndex cur = e;
        accumulate(phase, cur, g);
        accumulate(phase, cur, o);
        return hermitian_result(phase, cur);
    });
}

SignedPauli CliffordElement::conjugate(const PauliIndex &a) const {
    if (a.n != n_) {
        throw Error(ErrorKind::Dimension, "conjugate: qubit count mismatch");
    }
    int phase = std::popcount(a.x & a.z) & 3;
    PauliIndex cur = PauliIndex::identity(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        if ((a.x >> k) & 1) {
            accumulate(phase, cur, images_[k]);
        }
    }
    for (std::size_t k = 0; k < n_; ++k) {
        if ((a.z >> k) & 1) {
            accumulate(phase, cur, images_[n_ + k]);
        }
    }
    return hermitian_result(phase, cur);
}

SignedPauli CliffordElement::conjugate(const SignedPauli &a) const {
    SignedPauli out = conjugate(a.index);
    out.sign ^= a.sign & 1;
    return out;
}

SignedPauli CliffordElement::conjugate_inverse(const PauliIndex &a) const {
    return inverse().conjugate(a);
}

CliffordElement CliffordElement::compose(const CliffordElement &other) const {
    if (other.n_ != n_) {
        throw Error(ErrorKind::Dimension, "compose: qubit count mismatch");
    }
    CliffordElement out;
    out.n_ = n_;
    for (const auto &img : other.images_) {
        out.images_.push_back(conjugate(img));
    }
    return out;
}

CliffordElement CliffordElement::inverse() const {
    const std::size_t m = 2 * n_;
    // Gauss-Jordan over GF(2) on [S | I]; rows are basis coordinates.
    std::vector<std::uint64_t> left(m, 0), right(m, 0);
    for (std::size_t col = 0; col < m; ++col) {
        std::uint64_t v = images_[col].index.packed();
        for (std::size_t row = 0; row < m; ++row) {
            if ((v >> row) & 1) {
                left[row] |= std::uint64_t{1} << col;
            }
        }
    }
    for (std::size_t row = 0; row < m; ++row) {
        right[row] = std::uint64_t{1} << row;
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t p = col;
        while (p < m && !((left[p] >> col) & 1)) {
            ++p;
        }
        if (p == m) {
            throw Error(ErrorKind::Internal, "inverse: singular symplectic matrix");
        }
        std::swap(left[p], left[col]);
        std::swap(right[p], right[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r != col && ((left[r] >> col) & 1)) {
                left[r] ^= left[col];
                right[r] ^= right[col];
            }
        }
    }
    // Column j of S^{-1} is the preimage b_j of basis vector j.
    CliffordElement out;
    out.n_ = n_;
    for (std::size_t j = 0; j < m; ++j) {
        std::uint64_t b = 0;
        for (std::size_t row = 0; row < m; ++row) {
            if ((right[row] >> j) & 1) {
                b |= std::uint64_t{1} << row;
            }
        }
        PauliIndex pre = PauliIndex::from_packed(n_, b);
        out.images_.push_back({pre, conjugate(pre).sign});
    }
    return out;
}

bool CliffordElement::operator<(const CliffordElement &other) const {
    if (n_ != other.n_) {
        return n_ < other.n_;
    }
    for (std::size_t k = 0; k < images_.size(); ++k) {
        if (images_[k].index != other.images_[k].index) {
            return images_[k].index < other.images_[k].index;
        }
        if (images_[k].sign != other.images_[k].sign) {
            return images_[k].sign < other.images_[k].sign;
        }
    }
    return false;
}

nlohmann::json CliffordElement::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["images"] = nlohmann::json::array();
    j["signs"] = nlohmann::json::array();
    for (const auto &img : images_) {
        j["images"].push_back(img.index.hex());
        j["signs"].push_back(img.sign);
    }
    return j;
}

CliffordElement CliffordElement::from_json(const nlohmann::json &j) {
    try {
        std::size_t n = j.at("n").get<std::size_t>();
        const auto &imgs = j.at("images");
        const auto &signs = j.at("signs");
        if (imgs.size() != signs.size()) {
            throw Error(ErrorKind::Format, "clifford: images and signs differ in length");
        }
        std::vector<SignedPauli> images;
        for (std::size_t k = 0; k < imgs.size(); ++k) {
            images.push_back({PauliIndex::from_hex(n, imgs[k].get<std::string>()), signs[k].get<int>()});
        }
        return from_images(n, std::move(images));
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Format, std::string("clifford: ") + e.what());
    }
}

std::vector<CliffordElement> enumerate_clifford(std::size_t n, std::size_t cap) {
    if (n < 1) {
        throw Error(ErrorKind::Domain, "enumerate_clifford: n must be positive");
    }
    if (n > cap || n > 2) {
        throw Error(ErrorKind::Capacity, "enumerate_clifford: limited to n <= 2");
    }
    const std::size_t m = 2 * n;
    const std::uint64_t universe = std::uint64_t{1} << m;
    // Assignment order X_0, Z_0, X_1, Z_1, ...
    std::vector<std::size_t> slots;
    for (std::size_t k = 0; k < n; ++k) {
        slots.push_back(k);
        slots.push_back(n + k);
    }
    std::vector<std::vector<std::uint64_t>> symplectics;
    std::vector<std::uint64_t> chosen(m, 0);
    std::function<void(std::size_t)> search = [&](std::size_t depth) {
        if (depth == m) {
            symplectics.push_back(chosen);
            return;
        }
        std::size_t slot = slots[depth];
        for (std::uint64_t key = 1; key < universe; ++key) {
            PauliIndex cand = PauliIndex::from_packed(n, key);
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                std::size_t other = slots[d];
                ok = symplectic_form(cand, PauliIndex::from_packed(n, chosen[other])) ==
                     symplectic_form(basis_vector(n, slot), basis_vector(n, other));
            }
            if (ok) {
                chosen[slot] = key;
                search(depth + 1);
            }
        }
    };
    search(0);
    std::vector<CliffordElement> out;
    out.reserve(symplectics.size() << m);
    for (const auto &s : symplectics) {
        for (std::uint64_t signs = 0; signs < universe; ++signs) {
            std::vector<SignedPauli> images;
            for (std::size_t k = 0; k < m; ++k) {
                images.push_back({PauliIndex::from_packed(n, s[k]), static_cast<int>((signs >> k) & 1)});
            }
            out.push_back(CliffordElement::from_images(n, std::move(images)));
        }
    }
    return out;
}

Eigen::MatrixXcd clifford_unitary(const CliffordElement &g) {
    const std::size_t n = g.num_qubits();
    if (n > kMaxDenseQubits) {
        throw Error(ErrorKind::Capacity, "clifford_unitary: too many qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    auto dense = [&](const SignedPauli &p) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd m = pauli_matrix(p.index);
        return p.sign ? Eigen::MatrixXcd(-m) : m;
    };
    // U|0...0> spans the joint +1 eigenspace of the Z_k images.
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
        proj = proj * (Eigen::MatrixXcd::Identity(dim, dim) + dense(g.images()[n + k])) * 0.5;
    }
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < dim; ++c) {
        if (proj.col(c).norm() > proj.col(best).norm()) {
            best = c;
        }
    }
    Eigen::VectorXcd ground = proj.col(best).normalized();
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        Eigen::VectorXcd v = ground;
        for (std::size_t k = 0; k < n; ++k) {
            if ((j >> (n - 1 - k)) & 1) {
                v = dense(g.images()[k]) * v;
            }
        }
        u.col(j) = v;
    }
    return u;
}

}  // namespace qhvm
