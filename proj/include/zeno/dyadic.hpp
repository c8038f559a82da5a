// Exact arithmetic on nonnegative dyadic rationals (p / 2^q). Every event
// timestamp in the simulator is a DyadicTime; schedule comparisons must be
// bit-exact, so there is no floating point anywhere on this path.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace zeno {

using BigInt = boost::multiprecision::cpp_int;

// Normalized invariant: exponent == 0, or numerator is odd. Value is always
// nonnegative. Addition and scalar multiplication stay inside the type;
// subtraction is deliberately absent (schedules are built forward only).
class DyadicTime {
public:
    DyadicTime() : num_(0), exp_(0) {}

    DyadicTime(BigInt numerator, unsigned exponent)
        : num_(std::move(numerator)), exp_(exponent) {
        if (num_ < 0) {
            throw std::invalid_argument("DyadicTime: negative numerator");
        }
        normalize();
    }

    DyadicTime(std::uint64_t numerator, unsigned exponent)
        : DyadicTime(BigInt(numerator), exponent) {}

    static DyadicTime zero() { return DyadicTime(); }
    static DyadicTime one() { return DyadicTime(BigInt(1), 0); }

    // The machine quantum tau_n = 1/2^n.
    static DyadicTime quantum(unsigned n) { return DyadicTime(BigInt(1), n); }

    const BigInt& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }
    bool is_zero() const { return num_.is_zero(); }

    friend DyadicTime operator+(const DyadicTime& a, const DyadicTime& b) {
        unsigned e = std::max(a.exp_, b.exp_);
        BigInt n = (a.num_ << (e - a.exp_)) + (b.num_ << (e - b.exp_));
        return DyadicTime(std::move(n), e);
    }

    DyadicTime& operator+=(const DyadicTime& other) {
        *this = *this + other;
        return *this;
    }

    friend DyadicTime operator*(const DyadicTime& a, std::uint64_t k) {
        return DyadicTime(a.num_ * k, a.exp_);
    }

    friend std::strong_ordering operator<=>(const DyadicTime& a, const DyadicTime& b) {
        unsigned e = std::max(a.exp_, b.exp_);
        BigInt lhs = a.num_ << (e - a.exp_);
        BigInt rhs = b.num_ << (e - b.exp_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend bool operator==(const DyadicTime& a, const DyadicTime& b) {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }

    // Canonical machine-readable form "p/2^q", always normalized.
    std::string canonical() const {
        return num_.str() + "/2^" + std::to_string(exp_);
    }

    // Exact decimal expansion with `digits` fractional digits. Dyadic
    // rationals terminate after exactly `exponent` digits; fewer requested
    // digits truncate (loss reported through `truncated`), more pad zeros.
    std::string to_decimal_string(unsigned digits, bool* truncated = nullptr) const {
        if (truncated) *truncated = digits < exp_;
        BigInt integer = num_ >> exp_;
        std::string out = integer.str();
        if (digits == 0) return out;
        out += '.';
        BigInt frac = num_ - (integer << exp_);
        for (unsigned i = 0; i < digits; ++i) {
            if (i >= exp_) {
                out += '0';
                continue;
            }
            frac *= 10;
            BigInt digit = frac >> exp_;
            out += static_cast<char>('0' + digit.convert_to<int>());
            frac -= digit << exp_;
        }
        return out;
    }

    // Full decimal expansion, no trailing zeros. Display only.
    std::string decimal_exact() const { return to_decimal_string(exp_); }

    // Lossy conversion for plotting/axis scaling; never used in comparisons.
    double approx() const {
        return num_.convert_to<double>() /
               boost::multiprecision::pow(BigInt(2), exp_).convert_to<double>();
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            exp_ = 0;
            return;
        }
        unsigned shift = static_cast<unsigned>(boost::multiprecision::lsb(num_));
        if (shift > exp_) shift = exp_;
        num_ >>= shift;
        exp_ -= shift;
    }

    BigInt num_;
    unsigned exp_;
};

inline DyadicTime make_dyadic(BigInt numerator, unsigned exponent) {
    return DyadicTime(std::move(numerator), exponent);
}

inline std::strong_ordering compare(const DyadicTime& a, const DyadicTime& b) {
    return a <=> b;
}

}  // namespace zeno
