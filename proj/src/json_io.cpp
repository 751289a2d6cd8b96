#include "brainframe/json_io.hpp"

#include <array>
#include <filesystem>
#include <set>
#include <string_view>

#include "brainframe/error.hpp"
#include "brainframe/io.hpp"

namespace brainframe::json_io {

namespace {

constexpr std::array<std::string_view, ConductanceSet::count> kConductanceNames{
    "g_na_dend", "g_k_dend", "g_leak_dend", "g_na_soma", "g_k_soma",   "g_leak_soma", "g_na_axon",
    "g_k_axon",  "g_leak_axon", "e_na",     "e_k",       "e_leak",     "cm_dend",     "cm_soma",
    "cm_axon",   "g_dend_soma", "g_soma_axon", "shift_dend", "shift_soma", "shift_axon"};

void require_object(const json& doc, std::string_view what) {
    if (!doc.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& doc, std::string_view what, std::initializer_list<std::string_view> keys) {
    const std::set<std::string_view> allowed(keys);
    for (const auto& [key, value] : doc.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key '" + key + "' in " + std::string(what));
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
T get_required(const json& doc, const char* key, std::string_view what) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null())
        throw ConfigError(std::string(what) + " is missing required field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

std::optional<std::vector<std::uint32_t>> index_set(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) {
        if (it->get<std::string>() == "all") return std::nullopt;
        throw ConfigError(std::string("field '") + key + "' must be \"all\" or a list of indices");
    }
    try {
        return it->get<std::vector<std::uint32_t>>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' must be \"all\" or a list of indices");
    }
}

io::ConnectivityGeneratorSpec generator_from_json(const json& doc, const std::string& base_dir) {
    require_object(doc, "connectivity");
    reject_unknown(doc, "connectivity", {"kind", "weight", "p", "seed", "path"});
    const auto kind = get_required<std::string>(doc, "kind", "connectivity");
    if (kind == "all_to_all")
        return io::ConnectivityGeneratorSpec::all_to_all(get_or(doc, "weight", 0.04));
    if (kind == "fixed_density")
        return io::ConnectivityGeneratorSpec::fixed_density(
            get_required<double>(doc, "p", "connectivity"), get_or<std::uint64_t>(doc, "seed", 0),
            get_or(doc, "weight", 0.04));
    if (kind == "from_file") {
        std::filesystem::path path(get_required<std::string>(doc, "path", "connectivity"));
        if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
        return io::ConnectivityGeneratorSpec::from_file(path.string());
    }
    throw ConfigError("unknown connectivity kind '" + kind + "'");
}

} // namespace

json conductances_to_json(const ConductanceSet& cond) {
    json out = json::object();
    const auto values = cond.values();
    for (std::size_t i = 0; i < values.size(); ++i) out[std::string(kConductanceNames[i])] = values[i];
    return out;
}

ConductanceSet conductances_from_json(const json& doc, ConductanceSet base) {
    require_object(doc, "conductances");
    auto values = base.values();
    for (const auto& [key, value] : doc.items()) {
        const auto* it = std::find(kConductanceNames.begin(), kConductanceNames.end(), key);
        if (it == kConductanceNames.end()) throw ConfigError("unknown conductance '" + key + "'");
        if (!value.is_number()) throw ConfigError("conductance '" + key + "' must be a number");
        values[static_cast<std::size_t>(it - kConductanceNames.begin())] = value.get<double>();
    }
    auto cond = ConductanceSet::from_values(values);
    cond.validate();
    return cond;
}

SimulationConfig config_from_json(const json& doc, const std::string& base_dir) {
    require_object(doc, "simulation config");
    reject_unknown(doc, "simulation config",
                   {"use_case", "n", "duration_steps", "dt", "connectivity", "inputs", "backend",
                    "record", "seed", "init_jitter_mV", "precision", "conductances"});
    SimulationConfig c;
    c.use_case = parse_use_case(get_required<std::string>(doc, "use_case", "simulation config"));
    const auto n = get_required<std::int64_t>(doc, "n", "simulation config");
    if (n < 1) throw ConfigError("network size n must be >= 1");
    c.n = static_cast<std::size_t>(n);
    c.duration_steps = get_required<std::int64_t>(doc, "duration_steps", "simulation config");
    c.dt = get_or(doc, "dt", kDefaultDtMs);
    c.seed = get_or<std::uint64_t>(doc, "seed", 0);
    c.init_jitter_mv = get_or(doc, "init_jitter_mV", 0.0);

    const auto precision = get_or<std::string>(doc, "precision", "f64");
    if (precision == "f64")
        c.precision = Precision::f64;
    else if (precision == "f32")
        c.precision = Precision::f32;
    else
        throw ConfigError("precision must be f64 or f32");

    if (auto it = doc.find("conductances"); it != doc.end())
        c.conductances = conductances_from_json(*it);

    if (auto it = doc.find("backend"); it != doc.end()) {
        require_object(*it, "backend");
        reject_unknown(*it, "backend", {"kind", "workers"});
        const auto kind = get_or<std::string>(*it, "kind", "sequential");
        if (kind == "sequential") {
            c.backend = Backend::sequential();
        } else if (kind == "parallel") {
            const auto workers = get_or<std::int64_t>(*it, "workers", 1);
            if (workers < 1) throw ConfigError("worker count must be >= 1");
            c.backend = Backend::parallel(static_cast<std::size_t>(workers));
        } else {
            throw ConfigError("backend kind must be sequential or parallel");
        }
    }

    if (auto it = doc.find("record"); it != doc.end()) {
        require_object(*it, "record");
        reject_unknown(*it, "record", {"stride", "neurons"});
        c.record.stride = get_or<std::int64_t>(*it, "stride", 1);
        c.record.neurons = index_set(*it, "neurons");
    }

    if (auto it = doc.find("inputs"); it != doc.end()) {
        if (!it->is_array()) throw ConfigError("inputs must be a list of pulses");
        for (const auto& p : *it) {
            require_object(p, "pulse");
            reject_unknown(p, "pulse", {"start_step", "end_step", "amplitude", "targets"});
            Pulse pulse;
            pulse.start_step = get_required<std::int64_t>(p, "start_step", "pulse");
            pulse.end_step = get_required<std::int64_t>(p, "end_step", "pulse");
            pulse.amplitude = get_required<double>(p, "amplitude", "pulse");
            pulse.targets = index_set(p, "targets");
            c.inputs.pulses.push_back(std::move(pulse));
        }
    }

    if (auto it = doc.find("connectivity"); it != doc.end() && !it->is_null()) {
        if (c.use_case != UseCase::ngj)
            c.connectivity = io::generate_connectivity(generator_from_json(*it, base_dir), c.n);
    } else if (c.use_case != UseCase::ngj) {
        throw ConfigError(std::string(to_string(c.use_case)) + " requires a connectivity block");
    }

    c.validate();
    return c;
}

ExperimentSpec experiment_from_json(const json& doc) {
    require_object(doc, "experiment");
    reject_unknown(doc, "experiment",
                   {"use_case", "case", "n", "density", "real_time", "brain_seconds"});
    ExperimentSpec e;
    std::string use_case;
    if (doc.contains("use_case"))
        use_case = get_required<std::string>(doc, "use_case", "experiment");
    else
        use_case = get_required<std::string>(doc, "case", "experiment");
    e.use_case = parse_use_case(use_case);
    const auto n = get_required<std::int64_t>(doc, "n", "experiment");
    if (n < 0) throw ConfigError("experiment n must be positive");
    e.n = static_cast<std::uint64_t>(n);
    e.density = get_or(doc, "density", e.use_case == UseCase::ngj ? 0.0 : 1.0);
    e.real_time = get_or(doc, "real_time", false);
    e.brain_seconds = get_or(doc, "brain_seconds", 40.0);
    return e;
}

std::vector<ExperimentSpec> batch_from_json(const json& doc) {
    const json* list = &doc;
    if (doc.is_object()) {
        reject_unknown(doc, "batch", {"experiments"});
        auto it = doc.find("experiments");
        if (it == doc.end()) throw ConfigError("batch object needs an 'experiments' list");
        list = &*it;
    }
    if (!list->is_array()) throw ConfigError("batch must be a list of experiments");
    std::vector<ExperimentSpec> out;
    for (const auto& e : *list) out.push_back(experiment_from_json(e));
    if (out.empty()) throw ConfigError("experiment batch is empty");
    return out;
}

json decision_to_json(const SelectionDecision& d) {
    json out{{"fabric", std::string(to_string(d.fabric))}, {"reason", d.reason}};
    out["predicted_sec_per_step"] =
        d.predicted_sec_per_step ? json(*d.predicted_sec_per_step) : json(nullptr);
    return out;
}

json class_to_json(const ExperimentClass& cls) {
    return {{"scale", std::string(to_string(cls.scale))},
            {"use_case", std::string(to_string(cls.use_case))},
            {"n", cls.n},
            {"density", cls.density},
            {"density_bucket", density_bucket(cls.use_case, cls.density)},
            {"real_time", cls.real_time}};
}

profile::DfeTickModel dfe_model_from_json(const json& doc) {
    profile::DfeTickModel m;
    if (doc.is_null()) return m;
    require_object(doc, "dfe model");
    reject_unknown(doc, "dfe model", {"unroll_factor", "pipeline_depth", "clock_hz"});
    m.unroll_factor = get_or<std::uint64_t>(doc, "unroll_factor", m.unroll_factor);
    m.pipeline_depth = get_or<std::uint64_t>(doc, "pipeline_depth", m.pipeline_depth);
    m.clock_hz = get_or(doc, "clock_hz", m.clock_hz);
    m.validate();
    return m;
}

json profile_to_json(const profile::WorkloadProfile& p) {
    return {{"use_case", std::string(to_string(p.use_case))},
            {"n", p.n},
            {"density", p.density},
            {"connections", p.connections},
            {"flops_per_step", p.flops_per_step},
            {"gj_flops_per_step", p.gj_flops_per_step},
            {"mem_accesses_per_step", p.mem_accesses_per_step},
            {"ratio", p.ratio},
            {"gj_fraction", p.gj_fraction}};
}

json dfe_estimate_to_json(UseCase use_case, std::uint64_t n, double density,
                          const profile::DfeTickModel& model) {
    return {{"unroll_factor", model.unroll_factor},
            {"pipeline_depth", model.pipeline_depth},
            {"clock_hz", model.clock_hz},
            {"ticks_per_step", profile::estimate_dfe_ticks(use_case, n, density, model)},
            {"seconds_per_step", profile::estimate_dfe_seconds(use_case, n, density, model)}};
}

json measured_to_json(const profile::MeasuredOps& m) {
    return {{"steps", m.steps},
            {"ops_per_step", m.ops_per_step},
            {"cell_ops_per_step", m.cell_ops_per_step},
            {"gj_ops_per_step", m.gj_ops_per_step},
            {"connections", m.connections},
            {"delta_vs_reference", m.delta_vs_reference}};
}

json plan_to_json(const PlanReport& report) {
    json experiments = json::array();
    for (const auto& e : report.experiments) {
        json item{{"use_case", std::string(to_string(e.spec.use_case))},
                  {"n", e.spec.n},
                  {"density", e.spec.density},
                  {"real_time", e.spec.real_time},
                  {"brain_seconds", e.spec.brain_seconds},
                  {"steps", e.steps},
                  {"fabric", std::string(to_string(e.decision.fabric))},
                  {"reason", e.decision.reason}};
        item["predicted_sec_per_step"] = e.decision.predicted_sec_per_step
                                             ? json(*e.decision.predicted_sec_per_step)
                                             : json(nullptr);
        item["seconds"] = e.seconds ? json(*e.seconds) : json(nullptr);
        experiments.push_back(std::move(item));
    }
    json singles = json::array();
    for (const auto& c : report.single_fabric)
        singles.push_back({{"fabric", std::string(to_string(c.fabric))},
                           {"total_seconds", c.total_seconds},
                           {"time_saved_seconds", c.time_saved_seconds},
                           {"time_saved_percent", c.time_saved_percent},
                           {"energy_joules", c.energy_joules},
                           {"energy_saved_joules", c.energy_saved_joules},
                           {"energy_saved_percent", c.energy_saved_percent}});
    return {{"experiments", std::move(experiments)},
            {"total_seconds", report.total_seconds},
            {"total_minutes", report.total_seconds / 60.0},
            {"total_energy_joules", report.total_energy_joules},
            {"single_fabric", std::move(singles)},
            {"uncovered", report.uncovered}};
}

} // namespace brainframe::json_io
