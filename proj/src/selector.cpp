#include "brainframe/selector.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "brainframe/io.hpp"

namespace brainframe {

double tdp_watts(Fabric fabric) noexcept {
    switch (fabric) {
    case Fabric::dfe: return 140.0;
    case Fabric::phi: return 225.0;
    case Fabric::gpu: return 250.0;
    }
    return 0.0;
}

std::string_view to_string(Fabric fabric) noexcept {
    switch (fabric) {
    case Fabric::dfe: return "DFE";
    case Fabric::phi: return "PHI";
    case Fabric::gpu: return "GPU";
    }
    return "?";
}

Fabric parse_fabric(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (upper == "DFE") return Fabric::dfe;
    if (upper == "PHI") return Fabric::phi;
    if (upper == "GPU") return Fabric::gpu;
    throw ConfigError("unknown fabric '" + std::string(text) + "' (expected DFE, PHI or GPU)");
}

std::string_view to_string(Scale scale) noexcept {
    return scale == Scale::type_i ? "TYPE_I" : "TYPE_II";
}

UnsupportedSizeError::UnsupportedSizeError(std::uint64_t n)
    : ConfigError("unsupported network size " + std::to_string(n) + ": supported range is " +
                  std::to_string(kMinNetworkSize) + " to " + std::to_string(kMaxNetworkSize) +
                  " cells (the dataflow fabric caps networks at 7,680 cells)") {}

ExperimentClass classify(const ExperimentSpec& spec) {
    if (spec.n < kMinNetworkSize || spec.n > kMaxNetworkSize) throw UnsupportedSizeError(spec.n);
    if (spec.use_case != UseCase::ngj && !(spec.density >= 0.0 && spec.density <= 1.0))
        throw ConfigError("density must lie in [0, 1]");
    ExperimentClass cls;
    cls.scale = spec.n <= kTypeIMaxSize ? Scale::type_i : Scale::type_ii;
    cls.use_case = spec.use_case;
    cls.n = spec.n;
    cls.density = spec.use_case == UseCase::ngj ? 0.0 : spec.density;
    cls.real_time = spec.real_time;
    return cls;
}

namespace {

int bucket_quarters(UseCase use_case, double density) {
    if (use_case == UseCase::ngj) return 0;
    return static_cast<int>(std::floor(std::clamp(density, 0.0, 1.0) * 4.0 + 0.5));
}

} // namespace

double density_bucket(UseCase use_case, double density) {
    return bucket_quarters(use_case, density) / 4.0;
}

SelectionDecision select_by_rules(const ExperimentClass& cls) {
    const auto n = cls.n;
    const bool type_i = cls.scale == Scale::type_i;
    if (cls.real_time) return {Fabric::dfe, "R1-real-time", std::nullopt};
    switch (cls.use_case) {
    case UseCase::ngj: return {Fabric::dfe, "R2-ngj", std::nullopt};
    case UseCase::sgj:
        if (type_i) return {n < 480 ? Fabric::dfe : Fabric::gpu, "R3-sgj-type-i", std::nullopt};
        return {Fabric::gpu, "R4-sgj-type-ii", std::nullopt};
    case UseCase::rgj: break;
    }

    const int q = bucket_quarters(cls.use_case, cls.density);
    if (q == 4) {
        if (type_i) return {Fabric::dfe, "R5-rgj-full-density", std::nullopt};
        return {n >= 4800 ? Fabric::gpu : Fabric::dfe, "R5-rgj-full-density", std::nullopt};
    }
    if (type_i) {
        const bool phi = (q == 3 && n >= 960) || (q == 2 && n >= 864) || (q < 2 && n >= 672);
        return {phi ? Fabric::phi : Fabric::dfe, "R6-rgj-partial-type-i", std::nullopt};
    }
    const bool gpu = (q < 2 && n >= 3840) || (q >= 2 && n >= 4800);
    return {gpu ? Fabric::gpu : Fabric::phi, "R7-rgj-partial-type-ii", std::nullopt};
}

SelectionDecision select_fabric(const ExperimentClass& cls, const Calibration* calibration) {
    if (cls.real_time) {
        SelectionDecision d{Fabric::dfe, "R1-real-time", std::nullopt};
        if (calibration)
            d.predicted_sec_per_step =
                calibration->seconds_per_step(Fabric::dfe, cls.use_case, cls.density, cls.n);
        return d;
    }
    if (calibration && !calibration->empty()) {
        std::optional<SelectionDecision> best;
        for (auto fabric : kAllFabrics) {
            const auto t = calibration->seconds_per_step(fabric, cls.use_case, cls.density, cls.n);
            if (t && (!best || *t < *best->predicted_sec_per_step))
                best = SelectionDecision{fabric, "calibration-argmin", t};
        }
        if (best) return *best;
        auto d = select_by_rules(cls);
        d.reason += " (no calibration coverage)";
        return d;
    }
    return select_by_rules(cls);
}

std::optional<std::uint64_t> rt_max_network(Fabric fabric, UseCase use_case, double density,
                                            const Calibration* calibration) {
    if (calibration) {
        const auto grid = calibration->series(fabric, use_case, density);
        if (!grid.empty()) {
            std::optional<std::uint64_t> best;
            for (const auto& p : grid)
                if (p.sec_per_step <= kRealTimeStepSeconds) best = p.n;
            return best;
        }
    }
    // Measured real-time limits; the 0% bucket reuses the 25% row.
    const int q = bucket_quarters(use_case, density);
    switch (fabric) {
    case Fabric::dfe:
        switch (use_case) {
        case UseCase::rgj: return 310;
        case UseCase::sgj: return 400;
        case UseCase::ngj: return 7680;
        }
        break;
    case Fabric::phi:
        if (use_case == UseCase::ngj) return 96;
        return std::nullopt;
    case Fabric::gpu:
        if (use_case == UseCase::ngj) return 500;
        if (use_case == UseCase::sgj && q <= 2) return 96;
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Calibration

Calibration::Key Calibration::key(Fabric fabric, UseCase use_case, double density) {
    return {fabric, use_case, bucket_quarters(use_case, density)};
}

void Calibration::add(Fabric fabric, UseCase use_case, double density, std::uint64_t n,
                      double sec_per_step) {
    if (!std::isfinite(sec_per_step) || !(sec_per_step > 0.0))
        throw ConfigError("calibration times must be positive");
    if (n < 1) throw ConfigError("calibration network size must be >= 1");
    if (use_case != UseCase::ngj && !(density >= 0.0 && density <= 1.0))
        throw ConfigError("calibration density must lie in [0, 1]");
    auto& grid = series_[key(fabric, use_case, density)];
    auto it = std::lower_bound(grid.begin(), grid.end(), n,
                               [](const Point& p, std::uint64_t v) { return p.n < v; });
    if (it != grid.end() && it->n == n)
        throw ConfigError("duplicate calibration entry for " + std::string(to_string(fabric)) + "/" +
                          std::string(to_string(use_case)) + " n=" + std::to_string(n));
    grid.insert(it, Point{n, sec_per_step});
}

std::size_t Calibration::size() const noexcept {
    std::size_t total = 0;
    for (const auto& [k, grid] : series_) total += grid.size();
    return total;
}

std::vector<Calibration::Point> Calibration::series(Fabric fabric, UseCase use_case,
                                                    double density) const {
    auto it = series_.find(key(fabric, use_case, density));
    if (it == series_.end()) return {};
    return it->second;
}

std::optional<double> Calibration::seconds_per_step(Fabric fabric, UseCase use_case, double density,
                                                    std::uint64_t n) const {
    auto it = series_.find(key(fabric, use_case, density));
    if (it == series_.end()) return std::nullopt;
    const auto& grid = it->second;
    if (n < grid.front().n || n > grid.back().n) return std::nullopt;
    auto hi = std::lower_bound(grid.begin(), grid.end(), n,
                               [](const Point& p, std::uint64_t v) { return p.n < v; });
    if (hi->n == n) return hi->sec_per_step;
    const auto lo = std::prev(hi);
    const double frac = static_cast<double>(n - lo->n) / static_cast<double>(hi->n - lo->n);
    return lo->sec_per_step + frac * (hi->sec_per_step - lo->sec_per_step);
}

Calibration Calibration::from_csv_text(std::string_view text, const std::string& source) {
    Calibration cal;
    const auto table = io::parse_csv(text, source);
    if (table.empty()) throw ParseError(source, 1, 0, "missing header");
    const std::vector<std::string> expected{"fabric", "use_case", "density", "n", "sec_per_step"};
    if (table.front().fields != expected)
        throw ParseError(source, table.front().line, 0,
                         "expected header '" + std::string(kCsvHeader) + "'");
    for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r].fields;
        const std::size_t line = table[r].line;
        if (row.size() != 5)
            throw ParseError(source, line, 0, "expected 5 fields, found " + std::to_string(row.size()));
        Fabric fabric;
        UseCase use_case;
        try {
            fabric = parse_fabric(row[0]);
        } catch (const ConfigError& e) {
            throw ParseError(source, line, 1, e.what());
        }
        try {
            use_case = parse_use_case(row[1]);
        } catch (const ConfigError& e) {
            throw ParseError(source, line, 2, e.what());
        }
        const double density = io::parse_double_field(row[2], source, line, 3);
        const auto n = io::parse_uint_field(row[3], source, line, 4);
        const double sps = io::parse_double_field(row[4], source, line, 5);
        try {
            cal.add(fabric, use_case, density, n, sps);
        } catch (const ConfigError& e) {
            throw ParseError(source, line, 0, e.what());
        }
    }
    return cal;
}

Calibration Calibration::from_csv_file(const std::string& path) {
    return from_csv_text(io::read_file(path), path);
}

std::string Calibration::to_csv() const {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& [k, grid] : series_) {
        const auto& [fabric, use_case, quarters] = k;
        for (const auto& p : grid) {
            out += to_string(fabric);
            out += ',';
            out += to_string(use_case);
            out += ',';
            out += io::format_double(quarters / 4.0);
            out += ',';
            out += std::to_string(p.n);
            out += ',';
            out += io::format_double(p.sec_per_step);
            out += '\n';
        }
    }
    return out;
}

} // namespace brainframe
