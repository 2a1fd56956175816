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


#ifndef QHVM_SECTION_H
#define QHVM_SECTION_H

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhvm/pauli.h"
#include "qhvm/polytope.h"

namespace qhvm {

/// Innermost region containing a point.
enum class SectionLabel { StabilizerMix, PhysicalOnly, LambdaOnly, Outside };

std::string label_name(SectionLabel label);

/// I/4 + x (Z_1 + Z_2) + y (X_1 X_2 + Z_1 Z_2 - Y_1 Y_2).
ExactOp section_state(const Rational &x, const Rational &y);
RealOp section_state(double x, double y);

struct PointClassification {
    bool stabilizer_mix = false;
    bool physical = false;
    bool in_lambda = false;
    double min_eigenvalue = 0;
    SectionLabel label = SectionLabel::Outside;

    /// stabilizer-mix implies physical implies in Lambda_2.
    bool nested() const;
};

/// Membership in the two-qubit stabilizer polytope (LP over the 60 pure
/// stabilizer projectors), the physical states (min eigenvalue >= -tol) and
/// Lambda_2.
class SectionClassifier {
   public:
    explicit SectionClassifier(double tol = 1e-9);

    PointClassification classify(const RealOp &op) const;
    PointClassification classify(double x, double y) const {
        return classify(section_state(x, y));
    }
    bool stabilizer_mixture(const RealOp &op) const;

   private:
    double tol_;
    HalfspaceSystem system_;
    std::vector<std::vector<double>> columns_;
};

struct SectionSpec {
    double x_min = -0.3;
    double x_max = 0.3;
    double y_min = -0.3;
    double y_max = 0.3;
    std::size_t resolution = 100;
    std::size_t threads = 1;
};

/// Row-major: y outer, x inner.
struct SectionGrid {
    SectionSpec spec;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<SectionLabel> labels;
    std::size_t nesting_violations = 0;

    SectionLabel at(std::size_t ix, std::size_t iy) const {
        return labels[iy * xs.size() + ix];
    }
    /// x,y,label
    std::string to_csv() const;
    std::size_t count(SectionLabel label) const;
};

/// Throws Capacity above 2000 x 2000 and Domain for an empty range.
SectionGrid scan(const SectionSpec &spec, const SectionClassifier &classifier);

struct ProbeResult {
    std::string direction;
    SectionLabel inner;
    SectionLabel outer;
};

struct LabeledPoint {
    std::string name;
    double x = 0;
    double y = 0;
    PointClassification at;
    std::vector<ProbeResult> probes;

    /// True if the classification changes across some probe.
    bool on_boundary() const;
};

/// rho_1 .. rho_4 with probes at +-band along x and y.
std::vector<LabeledPoint> labeled_points(const SectionClassifier &classifier, double band = 1e-6);
nlohmann::json labeled_points_json(const std::vector<LabeledPoint> &points);

}  // namespace qhvm

#endif
