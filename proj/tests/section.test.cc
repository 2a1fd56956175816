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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

using namespace qhvm;

namespace {

const SectionClassifier &classifier() {
    static SectionClassifier c;
    return c;
}

// Spectrum of rho(x, y): 1/4 - y (three-fold on the span orthogonal to the
// Bell pair block) and 1/4 + y +- 2 sqrt(x^2 + y^2).
double analytic_min_eigenvalue(double x, double y) {
    return std::min(0.25 - y, 0.25 + y - 2 * std::sqrt(x * x + y * y));
}

}  // namespace

TEST(cross_section, section_state) {
    EXPECT_EQ(section_state(Rational(0), Rational(0)), ExactOp::maximally_mixed(2));
    ExactOp bell = ExactOp::maximally_mixed(2);
    for (const char *p : {"XX", "ZZ"}) {
        bell.set(PauliIndex::from_string(p), Rational(1, 4));
    }
    bell.set(PauliIndex::from_string("YY"), Rational(-1, 4));
    EXPECT_EQ(section_state(Rational(0), Rational(1, 4)), bell);
    auto rho1 = section_state(Rational(-1, 8), Rational(0));
    EXPECT_EQ(rho1.coefficient(PauliIndex::from_string("ZI")), Rational(-1, 8));
    EXPECT_EQ(rho1.coefficient(PauliIndex::from_string("IZ")), Rational(-1, 8));
}

TEST(cross_section, classify_points) {
    auto c = classifier().classify(0, 0);
    EXPECT_EQ(c.label, SectionLabel::StabilizerMix);
    EXPECT_EQ(classifier().classify(0, 0.25).label, SectionLabel::StabilizerMix);
    auto rho3 = classifier().classify(0, -1.0 / 12);
    EXPECT_NEAR(rho3.min_eigenvalue, 0.0, 1e-12);
    EXPECT_TRUE(rho3.physical);
    EXPECT_EQ(classifier().classify(0.125, 0).label, SectionLabel::StabilizerMix);
    EXPECT_NE(classifier().classify(0.3, 0.3).label, SectionLabel::StabilizerMix);
}

TEST(cross_section, physical_region_matches_spectrum) {
    for (int i = 0; i < 41; ++i) {
        for (int j = 0; j < 41; ++j) {
            double x = -0.3 + 0.015 * i, y = -0.3 + 0.015 * j;
            double lo = analytic_min_eigenvalue(x, y);
            if (std::abs(lo) < 1e-7) {
                continue;
            }
            auto c = classifier().classify(x, y);
            EXPECT_NEAR(c.min_eigenvalue, lo, 1e-10);
            EXPECT_EQ(c.physical, lo > 0) << x << "," << y;
            EXPECT_TRUE(c.nested()) << x << "," << y;
        }
    }
}

TEST(cross_section, labeled_points_on_boundaries) {
    auto points = labeled_points(classifier());
    ASSERT_EQ(points.size(), 4u);
    for (const auto &p : points) {
        EXPECT_TRUE(p.on_boundary()) << p.name;
        EXPECT_TRUE(p.at.nested()) << p.name;
    }
    // rho1 and rho4 have a zero eigenvalue.
    EXPECT_NEAR(points[0].at.min_eigenvalue, 0, 1e-12);
    EXPECT_NEAR(points[3].at.min_eigenvalue, 0, 1e-12);
    EXPECT_EQ(labeled_points_json(points).size(), 4u);
}

TEST(cross_section, scan_grid) {
    SectionSpec spec;
    spec.resolution = 100;
    auto start = std::chrono::steady_clock::now();
    auto grid = scan(spec, classifier());
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(seconds, 60.0);
    EXPECT_EQ(grid.labels.size(), 10000u);
    EXPECT_EQ(grid.nesting_violations, 0u);
    for (auto l : {SectionLabel::StabilizerMix, SectionLabel::PhysicalOnly, SectionLabel::LambdaOnly,
                   SectionLabel::Outside}) {
        EXPECT_GT(grid.count(l), 0u) << label_name(l);
    }
    std::string csv = grid.to_csv();
    EXPECT_EQ(csv.rfind("x,y,label\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10001);
    spec.threads = 4;
    EXPECT_EQ(scan(spec, classifier()).to_csv(), csv);
}

TEST(cross_section, scan_limits) {
    SectionSpec spec;
    spec.resolution = 2001;
    EXPECT_THROW(scan(spec, classifier()), Error);
    spec.resolution = 1;
    EXPECT_THROW(scan(spec, classifier()), Error);
}
