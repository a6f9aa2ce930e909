#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace zxdb {

    /// Spider phase, stored either as an exact rational multiple of pi or as a
    /// tagged inexact angle in radians.
    ///
    /// Exact values are kept in lowest terms and normalised into [0, 2)·pi, so
    /// the rule predicates (phase zero, integer multiple of pi, ±pi/2) are plain
    /// integer comparisons. Any arithmetic that touches an inexact operand
    /// produces an inexact result, reduced modulo 2·pi.
    class Phase {
    public:
        Phase() = default;

        /// (num/den)·pi. Throws std::invalid_argument for den == 0.
        static Phase fraction(std::int64_t num, std::int64_t den) {
            if (den == 0) {
                throw std::invalid_argument("phase denominator must be non-zero");
            }
            Phase p;
            p.num_ = num;
            p.den_ = den;
            p.normalize();
            return p;
        }

        static Phase zero() { return {}; }
        static Phase pi() { return fraction(1, 1); }

        static Phase radians(double rad) {
            Phase p;
            p.den_ = 0;
            p.rad_ = wrap(rad);
            return p;
        }

        [[nodiscard]] bool is_exact() const { return den_ != 0; }
        [[nodiscard]] std::int64_t numerator() const { return num_; }
        [[nodiscard]] std::int64_t denominator() const { return den_; }

        [[nodiscard]] bool is_zero() const { return is_exact() && num_ == 0; }
        [[nodiscard]] bool is_pi_multiple() const { return is_exact() && den_ == 1; }
        [[nodiscard]] bool is_half_pi() const { return is_exact() && den_ == 2; }

        /// Value in radians, in [0, 2·pi).
        [[nodiscard]] double to_radians() const {
            if (!is_exact()) {
                return rad_;
            }
            return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
        }

        Phase& operator+=(const Phase& rhs) {
            if (is_exact() && rhs.is_exact()) {
                const std::int64_t g = std::gcd(den_, rhs.den_);
                num_                 = num_ * (rhs.den_ / g) + rhs.num_ * (den_ / g);
                den_                 = den_ / g * rhs.den_;
                normalize();
            } else {
                *this = radians(to_radians() + rhs.to_radians());
            }
            return *this;
        }

        Phase operator-() const {
            if (is_exact()) {
                return fraction(-num_, den_);
            }
            return radians(-rad_);
        }

        Phase& operator-=(const Phase& rhs) { return *this += -rhs; }

        friend Phase operator+(Phase lhs, const Phase& rhs) { return lhs += rhs; }
        friend Phase operator-(Phase lhs, const Phase& rhs) { return lhs -= rhs; }

        /// Structural equality: exact against exact compares the fraction,
        /// inexact against inexact compares the stored radians bit for bit.
        friend bool operator==(const Phase& a, const Phase& b) {
            if (a.is_exact() != b.is_exact()) {
                return false;
            }
            if (a.is_exact()) {
                return a.num_ == b.num_ && a.den_ == b.den_;
            }
            return a.rad_ == b.rad_;
        }

        /// Circular distance in radians, used for tolerant comparisons.
        [[nodiscard]] double distance(const Phase& other) const {
            double d = std::fabs(to_radians() - other.to_radians());
            return std::min(d, 2.0 * std::numbers::pi - d);
        }

        /// "num/den" for exact phases (pi implied), decimal radians otherwise.
        [[nodiscard]] std::string to_string() const {
            if (is_exact()) {
                return std::to_string(num_) + "/" + std::to_string(den_);
            }
            return std::to_string(rad_) + "rad";
        }

    private:
        static double wrap(double rad) {
            constexpr double two_pi = 2.0 * std::numbers::pi;
            double           r      = std::fmod(rad, two_pi);
            if (r < 0) {
                r += two_pi;
            }
            if (r >= two_pi) {
                r = 0.0;
            }
            return r;
        }

        void normalize() {
            if (den_ < 0) {
                num_ = -num_;
                den_ = -den_;
            }
            const std::int64_t g = std::gcd(num_, den_);
            if (g > 1) {
                num_ /= g;
                den_ /= g;
            }
            const std::int64_t period = 2 * den_;
            num_ %= period;
            if (num_ < 0) {
                num_ += period;
            }
            if (num_ == 0) {
                den_ = 1;
            }
        }

        std::int64_t num_ = 0;
        std::int64_t den_ = 1; // 0 marks an inexact phase
        double       rad_ = 0.0;
    };

    inline std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << p.to_string(); }

} // namespace zxdb
