#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace brainframe {

// Scalar that wraps a double and counts every floating-point operation it
// takes part in: + - * / unary minus, exp and expm1. Comparisons and fabs are
// free. Instantiating the kernels and the engine with this type gives the
// instrumented counting build; numerics are bitwise those of double.
//
// The counter is thread-local. Only run counting simulations sequentially.
class CountingReal {
public:
    constexpr CountingReal() = default;
    constexpr CountingReal(double v) : value_(v) {} // NOLINT(google-explicit-constructor)

    constexpr double value() const noexcept { return value_; }
    explicit constexpr operator double() const noexcept { return value_; }

    static std::uint64_t& counter() noexcept {
        thread_local std::uint64_t ops = 0;
        return ops;
    }
    static void reset() noexcept { counter() = 0; }

    friend CountingReal operator+(CountingReal a, CountingReal b) noexcept {
        tick();
        return a.value_ + b.value_;
    }
    friend CountingReal operator-(CountingReal a, CountingReal b) noexcept {
        tick();
        return a.value_ - b.value_;
    }
    friend CountingReal operator*(CountingReal a, CountingReal b) noexcept {
        tick();
        return a.value_ * b.value_;
    }
    friend CountingReal operator/(CountingReal a, CountingReal b) noexcept {
        tick();
        return a.value_ / b.value_;
    }
    friend CountingReal operator-(CountingReal a) noexcept {
        tick();
        return -a.value_;
    }
    CountingReal& operator+=(CountingReal o) noexcept { return *this = *this + o; }
    CountingReal& operator-=(CountingReal o) noexcept { return *this = *this - o; }
    CountingReal& operator*=(CountingReal o) noexcept { return *this = *this * o; }
    CountingReal& operator/=(CountingReal o) noexcept { return *this = *this / o; }

    friend constexpr bool operator==(CountingReal a, CountingReal b) noexcept {
        return a.value_ == b.value_;
    }
    friend constexpr auto operator<=>(CountingReal a, CountingReal b) noexcept {
        return a.value_ <=> b.value_;
    }

    friend CountingReal exp(CountingReal a) noexcept {
        tick();
        return std::exp(a.value_);
    }
    friend CountingReal expm1(CountingReal a) noexcept {
        tick();
        return std::expm1(a.value_);
    }
    friend CountingReal abs(CountingReal a) noexcept { return std::fabs(a.value_); }
    friend bool isfinite(CountingReal a) noexcept { return std::isfinite(a.value_); }

private:
    static void tick() noexcept { ++counter(); }

    double value_ = 0.0;
};

} // namespace brainframe
