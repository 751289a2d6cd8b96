#include "brainframe/calibrate.hpp"

#include "brainframe/engine.hpp"
#include "brainframe/error.hpp"
#include "brainframe/io.hpp"
#include "brainframe/json_io.hpp"

namespace brainframe {

void CalibrationSweep::validate() const {
    if (workers < 1) throw ConfigError("calibration workers must be >= 1");
    if (steps < 1) throw ConfigError("calibration steps must be >= 1");
    if (cases.empty() || sizes.empty()) throw ConfigError("calibration sweep is empty");
    for (double d : densities)
        if (!(d > 0.0 && d <= 1.0)) throw ConfigError("calibration densities must lie in (0, 1]");
    for (auto n : sizes)
        if (n < 1) throw ConfigError("calibration sizes must be >= 1");
    if (dfe_model) {
        dfe_model->validate();
        if (label == Fabric::dfe)
            throw ConfigError("measured rows cannot be labelled DFE when the DFE model is enabled");
    }
}

CalibrationSweep sweep_from_json(const nlohmann::json& doc) {
    CalibrationSweep s;
    if (!doc.is_object()) throw ConfigError("calibration sweep must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "label") {
                s.label = parse_fabric(value.get<std::string>());
            } else if (key == "workers") {
                const auto w = value.get<std::int64_t>();
                if (w < 1) throw ConfigError("calibration workers must be >= 1");
                s.workers = static_cast<std::size_t>(w);
            } else if (key == "cases") {
                s.cases.clear();
                for (const auto& c : value) s.cases.push_back(parse_use_case(c.get<std::string>()));
            } else if (key == "densities") {
                s.densities = value.get<std::vector<double>>();
            } else if (key == "sizes") {
                s.sizes = value.get<std::vector<std::uint64_t>>();
            } else if (key == "steps") {
                s.steps = value.get<std::int64_t>();
            } else if (key == "seed") {
                s.seed = value.get<std::uint64_t>();
            } else if (key == "weight") {
                s.weight = value.get<double>();
            } else if (key == "dfe_model") {
                if (!value.is_null()) s.dfe_model = json_io::dfe_model_from_json(value);
            } else {
                throw ConfigError("unknown key '" + key + "' in calibration sweep");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("calibration sweep: ") + e.what());
    }
    s.validate();
    return s;
}

Calibration run_calibration_sweep(const CalibrationSweep& sweep, const SweepProgress& progress) {
    sweep.validate();
    Calibration cal;
    for (auto use_case : sweep.cases) {
        const std::vector<double> densities =
            use_case == UseCase::ngj ? std::vector<double>{0.0} : sweep.densities;
        for (double density : densities) {
            for (auto n : sweep.sizes) {
                SimulationConfig config;
                config.use_case = use_case;
                config.n = static_cast<std::size_t>(n);
                config.duration_steps = sweep.steps;
                config.seed = sweep.seed;
                config.record.stride = sweep.steps; // one sample per neuron keeps memory flat
                config.backend = sweep.workers > 1 ? Backend::parallel(sweep.workers)
                                                   : Backend::sequential();
                if (use_case != UseCase::ngj) {
                    const auto gen = density >= 1.0
                                         ? io::ConnectivityGeneratorSpec::all_to_all(sweep.weight)
                                         : io::ConnectivityGeneratorSpec::fixed_density(
                                               density, sweep.seed, sweep.weight);
                    config.connectivity = io::generate_connectivity(gen, config.n);
                }
                const auto trace = simulate(config);
                const double sps = trace.timing.mean_s;
                cal.add(sweep.label, use_case, density, n, sps);
                if (progress) progress(use_case, density, n, sps);

                if (sweep.dfe_model)
                    cal.add(Fabric::dfe, use_case, density, n,
                            profile::estimate_dfe_seconds(use_case, n, density, *sweep.dfe_model));
            }
        }
    }
    return cal;
}

} // namespace brainframe
