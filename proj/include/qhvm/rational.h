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

#ifndef QHVM_RATIONAL_H
#define QHVM_RATIONAL_H

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace qhvm {

using Rational = mpq_class;

/// Comparison policy used by code templated over the scalar field. Exact
/// rationals compare exactly; doubles use an absolute band.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational &v) {
        return sgn(v) == 0;
    }
    static bool is_positive(const Rational &v) {
        return sgn(v) > 0;
    }
    static bool is_negative(const Rational &v) {
        return sgn(v) < 0;
    }
    static double to_double(const Rational &v) {
        return v.get_d();
    }
    static Rational from_rational(const Rational &v) {
        return v;
    }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr double eps = 1e-11;
    static bool is_zero(double v) {
        return std::fabs(v) <= eps;
    }
    static bool is_positive(double v) {
        return v > eps;
    }
    static bool is_negative(double v) {
        return v < -eps;
    }
    static double to_double(double v) {
        return v;
    }
    static double from_rational(const Rational &v) {
        return v.get_d();
    }
};

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double v) {
    Rational r(v);
    r.canonicalize();
    return r;
}

inline Rational dyadic(int numerator, unsigned log2_denominator) {
    Rational r(numerator);
    r /= Rational(mpz_class(1) << log2_denominator);
    return r;
}

}  // namespace qhvm

#endif
