/*
   Copyright 2026 The pifs-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pifs {

/// Nonnegative extended real: a finite double or the distinguished value +inf.
/// Divergent series (entropy, Lyapunov exponents) report +inf through this type
/// rather than through a floating-point overflow.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr explicit ExtReal(double v) : value_(v) {}

    static constexpr ExtReal infinity() {
        ExtReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    double value() const {
        if (infinite_) throw std::domain_error("ExtReal: value() of +inf");
        return value_;
    }

    /// +inf maps to the IEEE infinity.
    double to_double() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
        if (x.infinite_) return os << "inf";
        return os << x.value_;
    }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

} // namespace pifs
