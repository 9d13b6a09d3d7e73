// Absolute/relative tolerance comparator for test assertions. The vendored
// doctest Approx only supports its blended epsilon; the suites here need the
// distinction between a pure relative band (epsilon) and an absolute one
// (margin) to mirror how each oracle's error bound is derived.
#pragma once

#include <algorithm>
#include <cmath>

#include "doctest.h"

namespace testutil {

class Approx {
public:
    explicit Approx(double value) : value_(value) {}

    // |lhs - value| <= rel * |value|
    Approx& epsilon(double rel) {
        rel_ = rel;
        return *this;
    }
    // |lhs - value| <= abs
    Approx& margin(double abs) {
        abs_ = abs;
        return *this;
    }

    double value() const { return value_; }
    double tolerance() const {
        return std::max(abs_, rel_ * std::fabs(value_));
    }

    friend bool operator==(double lhs, const Approx& rhs) {
        return std::fabs(lhs - rhs.value_) <= rhs.tolerance();
    }
    friend bool operator==(const Approx& lhs, double rhs) {
        return rhs == lhs;
    }
    friend bool operator!=(double lhs, const Approx& rhs) {
        return !(lhs == rhs);
    }
    friend bool operator!=(const Approx& lhs, double rhs) {
        return !(rhs == lhs);
    }
    friend bool operator<(double lhs, const Approx& rhs) {
        return lhs < rhs.value_ && lhs != rhs;
    }
    friend bool operator>(double lhs, const Approx& rhs) {
        return lhs > rhs.value_ && lhs != rhs;
    }

private:
    double value_;
    double rel_ = 0.0;
    double abs_ = 0.0;
};

}  // namespace testutil

namespace doctest {
template <>
struct StringMaker<testutil::Approx> {
    static String convert(const testutil::Approx& a) {
        return String("Approx(") + toString(a.value()) + " +/- " +
               toString(a.tolerance()) + ")";
    }
};
}  // namespace doctest
