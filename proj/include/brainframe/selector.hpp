#pragma once

// Accelerator selection: experiment classification, the default rule table,
// calibration-driven argmin and real-time-achievable network sizes.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "brainframe/error.hpp"
#include "brainframe/model.hpp"

namespace brainframe {

enum class Fabric { dfe, phi, gpu };

inline constexpr std::array<Fabric, 3> kAllFabrics{Fabric::dfe, Fabric::phi, Fabric::gpu};

// Nominal board power: 140 W, 225 W, 250 W.
double tdp_watts(Fabric fabric) noexcept;
std::string_view to_string(Fabric fabric) noexcept; // "DFE", "PHI", "GPU"
Fabric parse_fabric(std::string_view text);          // case-insensitive; ConfigError

inline constexpr std::uint64_t kMinNetworkSize = 96;
inline constexpr std::uint64_t kTypeIMaxSize = 960;
inline constexpr std::uint64_t kMaxNetworkSize = 7680;
inline constexpr double kRealTimeStepSeconds = 50e-6;

struct ExperimentSpec {
    UseCase use_case = UseCase::rgj;
    std::uint64_t n = kMinNetworkSize;
    double density = 1.0; // ignored for NGJ
    bool real_time = false;
    double brain_seconds = 40.0;
};

enum class Scale { type_i, type_ii };
std::string_view to_string(Scale scale) noexcept;

struct ExperimentClass {
    Scale scale = Scale::type_i;
    UseCase use_case = UseCase::rgj;
    std::uint64_t n = kMinNetworkSize;
    double density = 1.0;
    bool real_time = false;
};

class UnsupportedSizeError : public ConfigError {
public:
    explicit UnsupportedSizeError(std::uint64_t n);
};

// 96 <= n <= 960 is TYPE_I (960 included), 960 < n <= 7680 is TYPE_II.
// Throws UnsupportedSizeError outside [96, 7680] and ConfigError for a
// density outside [0, 1].
ExperimentClass classify(const ExperimentSpec& spec);

// Nearest of {0, 0.25, 0.5, 0.75, 1}; halfway values go to the denser bucket.
// NGJ always maps to 0.
double density_bucket(UseCase use_case, double density);

// Measured seconds per step keyed by (fabric, use case, density bucket) with
// a grid over n. Interpolation is piecewise linear in n inside the grid; n
// outside the grid is not covered.
class Calibration {
public:
    struct Point {
        std::uint64_t n;
        double sec_per_step;
    };

    static constexpr std::string_view kCsvHeader = "fabric,use_case,density,n,sec_per_step";

    // Throws ParseError with row/column.
    static Calibration from_csv_text(std::string_view text, const std::string& source = "<calibration>");
    static Calibration from_csv_file(const std::string& path);
    std::string to_csv() const;

    // Throws ConfigError on non-positive time or a duplicate key.
    void add(Fabric fabric, UseCase use_case, double density, std::uint64_t n, double sec_per_step);

    bool empty() const noexcept { return series_.empty(); }
    std::size_t size() const noexcept;

    std::optional<double> seconds_per_step(Fabric fabric, UseCase use_case, double density,
                                           std::uint64_t n) const;
    // Grid for one key, sorted by n; empty when absent.
    std::vector<Point> series(Fabric fabric, UseCase use_case, double density) const;

private:
    using Key = std::tuple<Fabric, UseCase, int>; // bucket in quarters
    static Key key(Fabric fabric, UseCase use_case, double density);
    std::map<Key, std::vector<Point>> series_;
};

struct SelectionDecision {
    Fabric fabric = Fabric::dfe;
    std::string reason;
    std::optional<double> predicted_sec_per_step;
};

// Default rule table (R1..R7) on the bucketed density.
SelectionDecision select_by_rules(const ExperimentClass& cls);

// Real-time experiments always get the DFE. Otherwise, with a calibration,
// the fabric with the lowest interpolated step time wins (ties in DFE, PHI,
// GPU order); with no calibration or no covering entry the rule table
// decides.
SelectionDecision select_fabric(const ExperimentClass& cls, const Calibration* calibration = nullptr);

// Largest network that meets the 50 us real-time step. With a calibration
// series for the key: largest grid n whose step time <= 50 us. Otherwise the
// measured defaults. nullopt: not achievable at any size.
std::optional<std::uint64_t> rt_max_network(Fabric fabric, UseCase use_case, double density,
                                            const Calibration* calibration = nullptr);

} // namespace brainframe
