#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace brainframe {

// Dense N x N gap-junction weights, row-major. Row i holds the incoming
// connections of neuron i. Zero means "not connected". Diagonal entries are
// allowed and count toward density.
class ConnectivityMatrix {
public:
    ConnectivityMatrix() = default;
    explicit ConnectivityMatrix(std::size_t n);
    // Throws ConfigError unless weights.size() == n*n and every weight is
    // finite and non-negative.
    ConnectivityMatrix(std::size_t n, std::vector<double> weights);

    static ConnectivityMatrix all_to_all(std::size_t n, double weight);

    std::size_t n() const noexcept { return n_; }
    double at(std::size_t row, std::size_t col) const { return weights_[row * n_ + col]; }
    void set(std::size_t row, std::size_t col, double weight);
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(weights_).subspan(i * n_, n_);
    }
    const std::vector<double>& weights() const noexcept { return weights_; }

    std::size_t nonzero_count() const noexcept;
    // nonzero_count / n^2; 0 for an empty matrix.
    double density() const noexcept;

    friend bool operator==(const ConnectivityMatrix&, const ConnectivityMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> weights_;
};

// Current pulse applied to the dendrite over steps [start_step, end_step).
struct Pulse {
    std::int64_t start_step = 0;
    std::int64_t end_step = 0;
    double amplitude = 0.0; // uA/cm^2
    std::optional<std::vector<std::uint32_t>> targets; // nullopt: every neuron

    bool active_at(std::int64_t step) const noexcept { return step >= start_step && step < end_step; }
    friend bool operator==(const Pulse&, const Pulse&) = default;
};

struct EvokedInputSchedule {
    std::vector<Pulse> pulses;

    // Throws ConfigError on start > end, non-finite amplitude or a target
    // index >= n.
    void validate(std::size_t n) const;
    friend bool operator==(const EvokedInputSchedule&, const EvokedInputSchedule&) = default;
};

} // namespace brainframe
