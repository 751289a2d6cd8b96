#include "brainframe/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brainframe/error.hpp"

namespace brainframe {

ConnectivityMatrix::ConnectivityMatrix(std::size_t n) : n_(n), weights_(n * n, 0.0) {}

ConnectivityMatrix::ConnectivityMatrix(std::size_t n, std::vector<double> weights)
    : n_(n), weights_(std::move(weights)) {
    if (weights_.size() != n_ * n_)
        throw ConfigError("connectivity matrix holds " + std::to_string(weights_.size()) +
                          " weights, expected " + std::to_string(n_ * n_));
    for (double w : weights_)
        if (!std::isfinite(w) || w < 0.0)
            throw ConfigError("connectivity weights must be finite and non-negative");
}

ConnectivityMatrix ConnectivityMatrix::all_to_all(std::size_t n, double weight) {
    if (!std::isfinite(weight) || !(weight > 0.0))
        throw ConfigError("all-to-all weight must be finite and positive");
    return ConnectivityMatrix(n, std::vector<double>(n * n, weight));
}

void ConnectivityMatrix::set(std::size_t row, std::size_t col, double weight) {
    if (!std::isfinite(weight) || weight < 0.0)
        throw ConfigError("connectivity weights must be finite and non-negative");
    weights_.at(row * n_ + col) = weight;
}

std::size_t ConnectivityMatrix::nonzero_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](double w) { return w != 0.0; }));
}

double ConnectivityMatrix::density() const noexcept {
    if (n_ == 0) return 0.0;
    return static_cast<double>(nonzero_count()) / static_cast<double>(n_ * n_);
}

void EvokedInputSchedule::validate(std::size_t n) const {
    for (const auto& p : pulses) {
        if (p.start_step > p.end_step)
            throw ConfigError("pulse start_step " + std::to_string(p.start_step) +
                              " is after end_step " + std::to_string(p.end_step));
        if (p.start_step < 0) throw ConfigError("pulse start_step must be >= 0");
        if (!std::isfinite(p.amplitude)) throw ConfigError("pulse amplitude must be finite");
        if (p.targets)
            for (auto t : *p.targets)
                if (t >= n)
                    throw ConfigError("pulse target " + std::to_string(t) +
                                      " outside network of " + std::to_string(n));
    }
}

} // namespace brainframe
