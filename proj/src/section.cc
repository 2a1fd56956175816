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


#include "qhvm/section.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qhvm/lp.h"
#include "qhvm/oracle.h"

namespace qhvm {

namespace {

constexpr std::size_t kMaxSectionResolution = 2000;

const PauliIndex kZ1 = PauliIndex::from_string("ZI");
const PauliIndex kZ2 = PauliIndex::from_string("IZ");
const PauliIndex kXX = PauliIndex::from_string("XX");
const PauliIndex kYY = PauliIndex::from_string("YY");
const PauliIndex kZZ = PauliIndex::from_string("ZZ");

SectionLabel innermost(const PointClassification &c) {
    if (c.stabilizer_mix) {
        return SectionLabel::StabilizerMix;
    }
    if (c.physical) {
        return SectionLabel::PhysicalOnly;
    }
    if (c.in_lambda) {
        return SectionLabel::LambdaOnly;
    }
    return SectionLabel::Outside;
}

std::vector<double> grid_axis(double lo, double hi, std::size_t res) {
    std::vector<double> out(res);
    for (std::size_t k = 0; k < res; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(res - 1);
    }
    return out;
}

}  // namespace

std::string label_name(SectionLabel label) {
    switch (label) {
        case SectionLabel::StabilizerMix:
            return "stabilizer-mix";
        case SectionLabel::PhysicalOnly:
            return "physical-only";
        case SectionLabel::LambdaOnly:
            return "lambda-only";
        case SectionLabel::Outside:
            return "outside";
    }
    return "outside";
}

ExactOp section_state(const Rational &x, const Rational &y) {
    ExactOp op = ExactOp::maximally_mixed(2);
    op.set(kZ1, x);
    op.set(kZ2, x);
    op.set(kXX, y);
    op.set(kZZ, y);
    op.set(kYY, -y);
    return op;
}

RealOp section_state(double x, double y) {
    RealOp op = RealOp::maximally_mixed(2);
    op.set(kZ1, x);
    op.set(kZ2, x);
    op.set(kXX, y);
    op.set(kZZ, y);
    op.set(kYY, -y);
    return op;
}

bool PointClassification::nested() const {
    return (!stabilizer_mix || physical) && (!physical || in_lambda);
}

SectionClassifier::SectionClassifier(double tol) : tol_(tol), system_(2) {
    const auto &catalog = system_.catalog();
    columns_.assign(16, std::vector<double>(catalog.size()));
    for (std::size_t j = 0; j < catalog.size(); ++j) {
        auto coeffs = to_real(catalog[j].projector()).dense_coefficients();
        for (std::size_t i = 0; i < 16; ++i) {
            columns_[i][j] = coeffs[i];
        }
    }
}

bool SectionClassifier::stabilizer_mixture(const RealOp &op) const {
    auto target = op.dense_coefficients();
    auto lp = solve_feasibility<double>(columns_, target);
    if (!lp.feasible) {
        return false;
    }
    // Re-check the float solution.
    for (std::size_t i = 0; i < 16; ++i) {
        double v = 0;
        for (std::size_t j = 0; j < lp.solution.size(); ++j) {
            if (lp.solution[j] < -tol_) {
                return false;
            }
            v += columns_[i][j] * lp.solution[j];
        }
        if (std::abs(v - target[i]) > tol_) {
            return false;
        }
    }
    return true;
}

PointClassification SectionClassifier::classify(const RealOp &op) const {
    if (op.num_qubits() != 2) {
        throw Error(ErrorKind::Dimension, "section: two-qubit operators only");
    }
    PointClassification c;
    c.min_eigenvalue = min_eigenvalue(to_dense(op));
    c.physical = c.min_eigenvalue >= -tol_;
    c.in_lambda = membership(op, system_, tol_).region != Region::Outside;
    c.stabilizer_mix = stabilizer_mixture(op);
    c.label = innermost(c);
    return c;
}

std::string SectionGrid::to_csv() const {
    std::ostringstream os;
    os << "x,y,label\n";
    char buf[64];
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,", xs[ix], ys[iy]);
            os << buf << label_name(at(ix, iy)) << '\n';
        }
    }
    return os.str();
}

std::size_t SectionGrid::count(SectionLabel label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

SectionGrid scan(const SectionSpec &spec, const SectionClassifier &classifier) {
    if (spec.resolution > kMaxSectionResolution) {
        throw Error(ErrorKind::Capacity, "section: resolution above 2000");
    }
    if (spec.resolution < 2 || !(spec.x_min < spec.x_max) || !(spec.y_min < spec.y_max)) {
        throw Error(ErrorKind::Domain, "section: empty grid");
    }
    SectionGrid grid;
    grid.spec = spec;
    grid.xs = grid_axis(spec.x_min, spec.x_max, spec.resolution);
    grid.ys = grid_axis(spec.y_min, spec.y_max, spec.resolution);
    const std::size_t total = grid.xs.size() * grid.ys.size();
    grid.labels.resize(total);
    std::vector<char> violation(total, 0);
    std::size_t threads = std::max<std::size_t>(1, spec.threads);
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](std::size_t w) {
        try {
            for (std::size_t k = w; k < total; k += threads) {
                auto c = classifier.classify(grid.xs[k % grid.xs.size()], grid.ys[k / grid.xs.size()]);
                grid.labels[k] = c.label;
                violation[k] = !c.nested();
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
    grid.nesting_violations = static_cast<std::size_t>(std::count(violation.begin(), violation.end(), 1));
    return grid;
}

bool LabeledPoint::on_boundary() const {
    return std::any_of(probes.begin(), probes.end(), [](const auto &p) { return p.inner != p.outer; });
}

std::vector<LabeledPoint> labeled_points(const SectionClassifier &classifier, double band) {
    std::vector<LabeledPoint> out = {
        {"rho1", -1.0 / 8, 0.0, {}, {}},
        {"rho2", 0.0, 1.0 / 4, {}, {}},
        {"rho3", 0.0, -1.0 / 12, {}, {}},
        {"rho4", 1.0 / 8, 0.0, {}, {}},
    };
    for (auto &p : out) {
        p.at = classifier.classify(p.x, p.y);
        // "inner" is the side toward the origin along each axis.
        double sx = p.x > 0 ? 1.0 : -1.0;
        double sy = p.y > 0 ? 1.0 : -1.0;
        p.probes.push_back({"x", classifier.classify(p.x - sx * band, p.y).label,
                            classifier.classify(p.x + sx * band, p.y).label});
        p.probes.push_back({"y", classifier.classify(p.x, p.y - sy * band).label,
                            classifier.classify(p.x, p.y + sy * band).label});
    }
    return out;
}

nlohmann::json labeled_points_json(const std::vector<LabeledPoint> &points) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &p : points) {
        nlohmann::json probes = nlohmann::json::array();
        for (const auto &pr : p.probes) {
            probes.push_back({{"direction", pr.direction}, {"inner", label_name(pr.inner)}, {"outer", label_name(pr.outer)}});
        }
        out.push_back({{"name", p.name},
                       {"x", p.x},
                       {"y", p.y},
                       {"label", label_name(p.at.label)},
                       {"min_eigenvalue", p.at.min_eigenvalue},
                       {"on_boundary", p.on_boundary()},
                       {"probes", probes}});
    }
    return out;
}

}  // namespace qhvm
