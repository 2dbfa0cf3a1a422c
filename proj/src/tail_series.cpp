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

#include "tail_series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pifs::detail {

namespace {

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// B_{2j} / (2j)! for j = 1..6.
constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
};

class GeometricEngine final : public TailEngine {
public:
    explicit GeometricEngine(GeometricTail t) : t_(t), log_ratio_(std::log(t.ratio)) {
        if (!(t.ratio > 0.0 && t.ratio < 1.0))
            throw std::invalid_argument("geometric tail: ratio must lie in (0, 1)");
        if (!(t.mass >= 0.0)) throw std::invalid_argument("geometric tail: mass must be >= 0");
    }
    std::unique_ptr<TailEngine> clone() const override {
        return std::make_unique<GeometricEngine>(*this);
    }
    double prob(double k) const override {
        return t_.mass * (1.0 - t_.ratio) * std::exp((k - 1.0) * log_ratio_);
    }
    double mass_from(double k0) const override {
        if (k0 <= 1.0) return t_.mass;
        return t_.mass * std::exp((k0 - 1.0) * log_ratio_);
    }
    double mass_from_log(double log_k0) const override {
        if (log_k0 > 700.0) return 0.0;
        return mass_from(std::round(std::exp(log_k0)));
    }
    ExtReal neg_plogp_from(double k0) const override {
        if (t_.mass == 0.0) return ExtReal(0.0);
        const double j0 = std::max(k0, 1.0) - 1.0;
        const double head = t_.mass * std::exp(j0 * log_ratio_);
        if (head == 0.0) return ExtReal(0.0);
        const double r = t_.ratio;
        const double s =
            head * (std::log(t_.mass * (1.0 - r)) + log_ratio_ * (j0 + r / (1.0 - r)));
        return ExtReal(-s);
    }
    double neg_plogp_below_log(double log_k1) const override {
        const double total = neg_plogp_from(1.0).value();
        if (log_k1 > 700.0) return total;
        return total - neg_plogp_from(std::round(std::exp(log_k1))).value();
    }

private:
    GeometricTail t_;
    double log_ratio_;
};

class PowerLawEngine final : public TailEngine {
public:
    explicit PowerLawEngine(PowerLawTail t) : t_(t) {
        if (!(t.exponent > 1.0)) throw std::invalid_argument("power-law tail: exponent must be > 1");
        if (!(t.mass >= 0.0)) throw std::invalid_argument("power-law tail: mass must be >= 0");
        zeta_ = hurwitz_pair(t.exponent, 1.0).zeta;
        scale_ = t.mass / zeta_;
    }
    std::unique_ptr<TailEngine> clone() const override {
        return std::make_unique<PowerLawEngine>(*this);
    }
    double prob(double k) const override { return scale_ * std::pow(k, -t_.exponent); }
    double mass_from(double k0) const override {
        if (k0 <= 1.0) return t_.mass;
        if (!std::isfinite(k0)) return 0.0;
        return scale_ * hurwitz_pair(t_.exponent, k0).zeta;
    }
    double mass_from_log(double log_k0) const override {
        if (log_k0 > 700.0) return 0.0;
        return mass_from(std::round(std::exp(log_k0)));
    }
    ExtReal neg_plogp_from(double k0) const override {
        if (t_.mass == 0.0) return ExtReal(0.0);
        if (!std::isfinite(k0)) return ExtReal(0.0);
        const auto hp = hurwitz_pair(t_.exponent, std::max(k0, 1.0));
        const double s = scale_ * (std::log(scale_) * hp.zeta - t_.exponent * hp.log_moment);
        return ExtReal(-s);
    }
    double neg_plogp_below_log(double log_k1) const override {
        const double total = neg_plogp_from(1.0).value();
        if (log_k1 > 700.0) return total;
        return total - neg_plogp_from(std::round(std::exp(log_k1))).value();
    }

private:
    PowerLawTail t_;
    double zeta_ = 1.0;
    double scale_ = 1.0;
};

// w(x) = 1 / (x log(x + a)^b). Integrals are taken in u = log x, where
// x w(x) = ell(u)^-b with ell(u) = log(e^u + a) = u + log1p(a e^-u).
class LogPowerEngine final : public TailEngine {
public:
    static constexpr std::size_t kTable = 4096;

    explicit LogPowerEngine(LogPowerTail t) : t_(t) {
        if (!(t.log_exponent > 1.0 && t.log_exponent <= 2.0))
            throw std::invalid_argument("log-power tail: log_exponent must lie in (1, 2]");
        if (!(t.shift > 0.0)) throw std::invalid_argument("log-power tail: shift must be > 0");
        if (!(t.mass >= 0.0)) throw std::invalid_argument("log-power tail: mass must be >= 0");
        // Suffix sums of w for k <= kTable, anchored on the asymptotic tail at kTable + 1.
        suffix_w_.assign(kTable + 2, 0.0);
        suffix_w_[kTable + 1] = tail_w_asymptotic(static_cast<double>(kTable + 1));
        for (std::size_t k = kTable; k >= 1; --k) suffix_w_[k] = suffix_w_[k + 1] + w(double(k));
        total_w_ = suffix_w_[1];
        scale_ = t.mass / total_w_;
        prefix_wlogw_.assign(kTable + 2, 0.0);
        for (std::size_t k = 1; k <= kTable; ++k)
            prefix_wlogw_[k + 1] = prefix_wlogw_[k] + xlogx(w(double(k)));
    }
    std::unique_ptr<TailEngine> clone() const override {
        return std::make_unique<LogPowerEngine>(*this);
    }

    double prob(double k) const override { return scale_ * w(k); }

    double mass_from(double k0) const override {
        if (k0 <= 1.0) return t_.mass;
        if (!std::isfinite(k0)) return 0.0;
        if (k0 <= double(kTable + 1)) return scale_ * suffix_w_[static_cast<std::size_t>(k0)];
        return scale_ * tail_w_asymptotic(k0);
    }

    double mass_from_log(double log_k0) const override {
        if (log_k0 <= kExactLogLevel) return mass_from(std::round(std::exp(log_k0)));
        // Endpoint corrections are below e^-36 relative to the integral.
        return scale_ * integral_w_from_log(log_k0);
    }

    ExtReal neg_plogp_from(double) const override { return ExtReal::infinity(); }

    double neg_plogp_below_log(double log_k1) const override {
        double tail_w = 0.0;
        double g_below = 0.0;  // Sum_{k < k1} w log w
        if (log_k1 <= kExactLogLevel) {
            const double k1 = std::round(std::exp(log_k1));
            tail_w = k1 <= double(kTable + 1) ? suffix_w_[std::max<std::size_t>(1, std::size_t(k1))]
                                              : tail_w_asymptotic(k1);
            g_below = wlogw_below(k1, log_k1);
        } else {
            tail_w = integral_w_from_log(log_k1);
            g_below = wlogw_below(std::numeric_limits<double>::infinity(), log_k1);
        }
        const double log_scale = std::log(scale_);
        const double sum_plogp = scale_ * (log_scale * (total_w_ - tail_w) + g_below);
        return -sum_plogp;
    }

private:
    LogPowerTail t_;
    std::vector<double> suffix_w_;
    std::vector<double> prefix_wlogw_;
    double total_w_ = 1.0;
    double scale_ = 1.0;

    double ell(double u) const { return u + std::log1p(t_.shift * std::exp(-u)); }

    double w(double x) const { return 1.0 / (x * std::pow(std::log(x + t_.shift), t_.log_exponent)); }

    double dw(double x) const {
        const double l = std::log(x + t_.shift);
        return -w(x) * (1.0 / x + t_.log_exponent / ((x + t_.shift) * l));
    }

    // Integral of w over [e^u0, inf).
    double integral_w_from_log(double u0) const {
        const double b = t_.log_exponent;
        double value = std::pow(u0, 1.0 - b) / (b - 1.0);
        if (u0 < 60.0) {
            auto corr = [&](double u) { return std::pow(ell(u), -b) - std::pow(u, -b); };
            value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                corr, u0, u0 + 60.0, 12, 1e-14);
        }
        return value;
    }

    double tail_w_asymptotic(double k0) const {
        return integral_w_from_log(std::log(k0)) + 0.5 * w(k0) - dw(k0) / 12.0;
    }

    // Sum_{1 <= k < k1} w log w; k1 may be +inf, in which case only log_k1 is used.
    double wlogw_below(double k1, double log_k1) const {
        if (k1 <= double(kTable + 1)) return prefix_wlogw_[std::max<std::size_t>(1, std::size_t(k1))];
        const double k_start = double(kTable + 1);
        const double b = t_.log_exponent;
        auto integrand = [&](double u) {
            const double l = ell(u);
            return (-u - b * std::log(l)) * std::pow(l, -b);
        };
        const double upper = std::isfinite(k1) ? std::log(k1) : log_k1;
        double integral = 0.0;
        double lo = std::log(k_start);
        while (lo < upper) {
            const double hi = std::min(2.0 * lo, upper);
            integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                integrand, lo, hi, 15, 1e-14);
            lo = hi;
        }
        auto g = [&](double x) { return xlogx(w(x)); };
        auto dg = [&](double x) { return dw(x) * (std::log(w(x)) + 1.0); };
        double em = 0.5 * g(k_start) - dg(k_start) / 12.0;
        if (std::isfinite(k1)) em += -0.5 * g(k1) + dg(k1) / 12.0;
        return prefix_wlogw_[kTable + 1] + integral + em;
    }
};

} // namespace

HurwitzPair hurwitz_pair(double s, double k0) {
    constexpr double kSwitch = 16.0;
    HurwitzPair out;
    double k = k0;
    for (; k < kSwitch; k += 1.0) {
        const double ks = std::pow(k, -s);
        out.zeta += ks;
        out.log_moment += ks * std::log(k);
    }
    const double big_k = k;
    const double lk = std::log(big_k);
    const double ks = std::pow(big_k, -s);
    const double k1s = big_k * ks;
    out.zeta += k1s / (s - 1.0) + 0.5 * ks;
    out.log_moment += k1s * (lk / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0))) + 0.5 * ks * lk;
    // Correction terms: B_{2j}/(2j)! (s)_{2j-1} K^{-s-2j+1} and their s-derivatives.
    double poch = s;            // (s)_{2j-1}
    double dlog_poch = 1.0 / s;  // d/ds log (s)_{2j-1}
    double kpow = ks / big_k;    // K^{-s-2j+1}
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        const double c = kBernoulliOverFactorial[j];
        out.zeta += c * poch * kpow;
        out.log_moment -= c * kpow * poch * (dlog_poch - lk);
        // (s)_{m+2} = (s)_m (s+m)(s+m+1) with m = 2j+1
        const double m = static_cast<double>(2 * j + 1);
        poch *= (s + m) * (s + m + 1.0);
        dlog_poch += 1.0 / (s + m) + 1.0 / (s + m + 1.0);
        kpow /= big_k * big_k;
    }
    return out;
}

std::unique_ptr<TailEngine> make_tail_engine(const TailModel& tail) {
    return std::visit(
        [](const auto& t) -> std::unique_ptr<TailEngine> {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, GeometricTail>) return std::make_unique<GeometricEngine>(t);
            else if constexpr (std::is_same_v<T, PowerLawTail>) return std::make_unique<PowerLawEngine>(t);
            else return std::make_unique<LogPowerEngine>(t);
        },
        tail);
}

} // namespace pifs::detail
