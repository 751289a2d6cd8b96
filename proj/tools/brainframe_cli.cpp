// brainframe command-line front end. Talks to the library exclusively
// through the C interface in brainframe/brainframe.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "brainframe/brainframe.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitCoverage = 4;

struct CliFailure {
    int exit_code;
    std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw CliFailure{kExitConfig, message}; }

int exit_code_for(bf_status status) {
    switch (status) {
    case BF_OK: return kExitOk;
    case BF_ERR_DIVERGENCE: return kExitDivergence;
    case BF_ERR_COVERAGE: return kExitCoverage;
    case BF_ERR_CONFIG:
    case BF_ERR_PARSE:
    case BF_ERR_INPUT_SHAPE:
    case BF_ERR_NUMERIC_DOMAIN:
    case BF_ERR_IO: return kExitConfig;
    default: return kExitFailure;
    }
}

void check(bf_status status) {
    if (status == BF_OK) return;
    std::string message = bf_last_error();
    if (status == BF_ERR_DIVERGENCE)
        message = "numeric divergence at step " + std::to_string(bf_last_divergence_step()) + ": " + message;
    throw CliFailure{exit_code_for(status), message};
}

struct StringDeleter {
    void operator()(char* s) const { bf_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) {
    OwnedString owned(s);
    return owned ? std::string(owned.get()) : std::string();
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};
using Config = Handle<bf_config, bf_config_free>;
using Trace = Handle<bf_trace, bf_trace_free>;
using Matrix = Handle<bf_matrix, bf_matrix_free>;
using Calibration = Handle<bf_calibration, bf_calibration_free>;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) config_error("cannot write '" + path + "'");
        out << text;
        if (!out.flush()) config_error("cannot write '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        config_error("cannot write '" + path + "'");
    }
}

// Sends text to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_atomic(out_path, text);
}

std::optional<std::size_t> env_workers() {
    const char* raw = std::getenv("BRAINFRAME_WORKERS");
    if (!raw || !*raw) return std::nullopt;
    std::size_t value = 0;
    const char* end = raw + std::char_traits<char>::length(raw);
    auto [ptr, ec] = std::from_chars(raw, end, value);
    if (ec != std::errc() || ptr != end || value < 1)
        config_error(std::string("BRAINFRAME_WORKERS must be a positive integer, got '") + raw + "'");
    return value;
}

// Flag wins over the environment, which wins over whatever the config says.
std::optional<std::size_t> resolve_workers(const std::optional<std::size_t>& flag) {
    if (flag) {
        if (*flag < 1) config_error("--workers must be >= 1");
        return flag;
    }
    return env_workers();
}

json parse_pulse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) config_error("--pulse expects start:end:amplitude, got '" + text + "'");
    try {
        std::size_t used = 0;
        const long long start = std::stoll(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("start");
        const long long end = std::stoll(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("end");
        const double amplitude = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("amplitude");
        return {{"start_step", start}, {"end_step", end}, {"amplitude", amplitude}};
    } catch (const std::exception&) {
        config_error("--pulse expects start:end:amplitude, got '" + text + "'");
    }
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::string use_case;
    std::int64_t n = 0;
    double density = 1.0;
    double weight = 0.04;
    std::string matrix_path;
    std::int64_t steps = 0;
    std::vector<std::string> pulses;
    std::optional<std::size_t> workers;
    std::int64_t stride = 1;
    std::vector<std::uint32_t> neurons;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    double dt = 0.05;
    std::string precision = "f64";
    std::string out;
};

json config_from_flags(const SimulateArgs& a) {
    if (a.use_case.empty()) config_error("simulate needs --config or --case");
    if (a.n < 1) config_error("--n must be >= 1");
    if (a.steps < 1) config_error("--steps must be >= 1");
    json doc{{"use_case", lower(a.use_case)},
             {"n", a.n},
             {"duration_steps", a.steps},
             {"dt", a.dt},
             {"seed", a.seed},
             {"init_jitter_mV", a.jitter},
             {"precision", a.precision},
             {"record", {{"stride", a.stride}}}};
    if (!a.neurons.empty()) doc["record"]["neurons"] = a.neurons;
    json inputs = json::array();
    for (const auto& p : a.pulses) inputs.push_back(parse_pulse(p));
    doc["inputs"] = std::move(inputs);
    if (lower(a.use_case) != "ngj") {
        if (!a.matrix_path.empty())
            doc["connectivity"] = {{"kind", "from_file"}, {"path", a.matrix_path}};
        else if (a.density >= 1.0)
            doc["connectivity"] = {{"kind", "all_to_all"}, {"weight", a.weight}};
        else
            doc["connectivity"] = {{"kind", "fixed_density"}, {"p", a.density}, {"seed", a.seed},
                                   {"weight", a.weight}};
    }
    return doc;
}

int run_simulate(const SimulateArgs& a) {
    std::string text;
    std::string base_dir;
    if (!a.config_path.empty()) {
        text = read_text(a.config_path);
        base_dir = fs::path(a.config_path).parent_path().string();
    } else {
        text = config_from_flags(a).dump();
    }
    Config config;
    check(bf_config_from_json(text.c_str(), base_dir.c_str(), config.out()));
    if (auto workers = resolve_workers(a.workers))
        check(bf_config_set_workers(config.get(), *workers == 1 ? 0 : *workers));

    Trace trace;
    check(bf_simulate(config.get(), trace.out()));
    char* summary = nullptr;
    check(bf_trace_summary_json(trace.get(), &summary));
    const std::string summary_text = take(summary);

    if (a.out.empty()) {
        char* csv = nullptr;
        check(bf_trace_to_csv(trace.get(), &csv));
        std::cout << take(csv);
        std::cerr << summary_text << '\n';
    } else {
        check(bf_trace_write_csv(trace.get(), a.out.c_str()));
        std::cout << summary_text << '\n';
    }
    return kExitOk;
}

// ---- profile ------------------------------------------------------------

struct ProfileArgs {
    std::string use_case;
    std::int64_t n = 0;
    double density = 1.0;
    std::int64_t measure_steps = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> unroll;
    std::optional<std::uint64_t> depth;
    std::optional<double> clock_hz;
    std::string out;
};

int run_profile(const ProfileArgs& a) {
    if (a.n < 1) config_error("--n must be >= 1");
    std::string model;
    if (a.unroll || a.depth || a.clock_hz) {
        json m = json::object();
        if (a.unroll) m["unroll_factor"] = *a.unroll;
        if (a.depth) m["pipeline_depth"] = *a.depth;
        if (a.clock_hz) m["clock_hz"] = *a.clock_hz;
        model = m.dump();
    }
    char* out = nullptr;
    check(bf_profile_json(lower(a.use_case).c_str(), static_cast<std::uint64_t>(a.n), a.density,
                          model.empty() ? nullptr : model.c_str(), a.measure_steps, a.seed, &out));
    emit(a.out, json::parse(take(out)).dump(2) + "\n");
    return kExitOk;
}

// ---- select -------------------------------------------------------------

struct SelectArgs {
    std::string use_case;
    std::int64_t n = 0;
    std::optional<double> density;
    bool real_time = false;
    bool details = false;
    bool rt_max = false;
    std::string calibration;
    std::string out;
};

void load_calibration(const std::string& path, Calibration& cal) {
    if (!path.empty()) check(bf_calibration_read_csv(path.c_str(), cal.out()));
}

int run_select(const SelectArgs& a) {
    Calibration cal;
    load_calibration(a.calibration, cal);
    const std::string use_case = lower(a.use_case);
    const double density = a.density.value_or(use_case == "ngj" ? 0.0 : 1.0);

    if (a.rt_max) {
        json doc = json::object();
        for (const char* fabric : {"DFE", "PHI", "GPU"}) {
            int found = 0;
            std::uint64_t cells = 0;
            check(bf_rt_max_network(fabric, use_case.c_str(), density, cal.get(), &found, &cells));
            doc[fabric] = found ? json(cells) : json(nullptr);
        }
        emit(a.out, json{{"use_case", use_case}, {"density", density}, {"rt_max_network", doc}}.dump(2) + "\n");
        return kExitOk;
    }

    if (a.n < 1) config_error("--n must be >= 1");
    const json experiment{{"use_case", use_case}, {"n", a.n}, {"density", density}, {"real_time", a.real_time}};
    char* out = nullptr;
    check(bf_select_json(experiment.dump().c_str(), cal.get(), a.details ? 1 : 0, &out));
    emit(a.out, json::parse(take(out)).dump(2) + "\n");
    return kExitOk;
}

// ---- plan ---------------------------------------------------------------

struct PlanArgs {
    std::string batch;
    std::string calibration;
    bool allow_fallback = false;
    std::string format = "json";
    std::string out;
};

int run_plan(const PlanArgs& a) {
    Calibration cal;
    load_calibration(a.calibration, cal);
    const std::string batch = read_text(a.batch);
    char* report = nullptr;
    char* table = nullptr;
    check(bf_plan(batch.c_str(), cal.get(), a.allow_fallback ? 1 : 0, &report, &table));
    const std::string report_text = take(report);
    const std::string table_text = take(table);
    if (a.format == "table")
        emit(a.out, table_text);
    else
        emit(a.out, json::parse(report_text).dump(2) + "\n");
    return kExitOk;
}

// ---- calibrate ----------------------------------------------------------

struct CalibrateArgs {
    std::string sweep_path;
    std::string label;
    std::optional<std::size_t> workers;
    std::vector<std::string> cases;
    std::vector<double> densities;
    std::vector<std::uint64_t> sizes;
    std::optional<std::int64_t> steps;
    std::optional<std::uint64_t> seed;
    std::optional<double> weight;
    bool dfe_model = false;
    bool quiet = false;
    std::string out;
};

void report_progress(const char* use_case, double density, std::uint64_t n, double sec_per_step, void*) {
    std::fprintf(stderr, "%s density=%g n=%llu: %.3e s/step\n", use_case, density,
                 static_cast<unsigned long long>(n), sec_per_step);
}

int run_calibrate(const CalibrateArgs& a) {
    json sweep = a.sweep_path.empty() ? json::object() : json::parse(read_text(a.sweep_path), nullptr, false);
    if (sweep.is_discarded()) config_error("calibration sweep '" + a.sweep_path + "' is not valid JSON");
    if (!a.label.empty()) sweep["label"] = a.label;
    if (!a.cases.empty()) {
        json cases = json::array();
        for (const auto& c : a.cases) cases.push_back(lower(c));
        sweep["cases"] = cases;
    }
    if (!a.densities.empty()) sweep["densities"] = a.densities;
    if (!a.sizes.empty()) sweep["sizes"] = a.sizes;
    if (a.steps) sweep["steps"] = *a.steps;
    if (a.seed) sweep["seed"] = *a.seed;
    if (a.weight) sweep["weight"] = *a.weight;
    if (a.dfe_model && !sweep.contains("dfe_model")) sweep["dfe_model"] = json::object();
    if (auto workers = resolve_workers(a.workers)) sweep["workers"] = *workers;

    Calibration cal;
    check(bf_calibrate(sweep.dump().c_str(), a.quiet ? nullptr : report_progress, nullptr, cal.out()));
    check(bf_calibration_write_csv(cal.get(), a.out.c_str()));
    std::cout << json{{"rows", bf_calibration_size(cal.get())}, {"path", a.out}}.dump() << '\n';
    return kExitOk;
}

// ---- gen-connectivity ---------------------------------------------------

struct GenArgs {
    std::string kind = "all_to_all";
    std::int64_t n = 0;
    double p = 1.0;
    std::uint64_t seed = 0;
    double weight = 0.04;
    std::string out;
};

int run_gen(const GenArgs& a) {
    if (a.n < 1) config_error("--n must be >= 1");
    json spec{{"kind", a.kind}, {"weight", a.weight}};
    if (a.kind == "fixed_density") {
        spec["p"] = a.p;
        spec["seed"] = a.seed;
    }
    Matrix matrix;
    check(bf_matrix_generate(spec.dump().c_str(), static_cast<std::size_t>(a.n), matrix.out()));
    check(bf_matrix_write_csv(matrix.get(), a.out.c_str()));
    std::cout << json{{"n", bf_matrix_size(matrix.get())},
                      {"density", bf_matrix_density(matrix.get())},
                      {"path", a.out}}.dump()
              << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"brainframe: gap-junction network simulator, workload profiler and fabric planner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bf_version()));

    const std::vector<std::string> cases{"rgj", "sgj", "ngj", "RGJ", "SGJ", "NGJ"};

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run the network simulation and write a trace CSV");
    auto* sim_config = simulate->add_option("--config", sim.config_path, "Simulation config JSON")
                           ->check(CLI::ExistingFile);
    std::vector<CLI::Option*> model_flags{
        simulate->add_option("--case", sim.use_case, "rgj, sgj or ngj")->check(CLI::IsMember(cases)),
        simulate->add_option("--n", sim.n, "Number of cells"),
        simulate->add_option("--density", sim.density, "Connection density in [0,1] (default 1)"),
        simulate->add_option("--weight", sim.weight, "Constant junction weight (default 0.04)"),
        simulate->add_option("--matrix", sim.matrix_path, "Connectivity matrix CSV")->check(CLI::ExistingFile),
        simulate->add_option("--steps", sim.steps, "Number of 50 us steps"),
        simulate->add_option("--pulse", sim.pulses, "Evoked input start:end:amplitude (repeatable)"),
        simulate->add_option("--stride", sim.stride, "Record every k-th step"),
        simulate->add_option("--neurons", sim.neurons, "Record only these cells")->delimiter(','),
        simulate->add_option("--seed", sim.seed, "Seed for connectivity and jitter"),
        simulate->add_option("--jitter", sim.jitter, "Initial voltage jitter in mV"),
        simulate->add_option("--dt", sim.dt, "Step size in ms"),
        simulate->add_option("--precision", sim.precision, "f64 or f32")->check(CLI::IsMember({"f64", "f32"})),
    };
    for (auto* flag : model_flags) sim_config->excludes(flag);
    simulate->add_option("--workers", sim.workers, "Parallel workers (1 = sequential)");
    simulate->add_option("--out", sim.out, "Trace CSV path (default stdout)");

    ProfileArgs prof;
    auto* profile = app.add_subcommand("profile", "Per-step FLOP and memory profile as JSON");
    profile->add_option("--case", prof.use_case, "rgj, sgj or ngj")->required()->check(CLI::IsMember(cases));
    profile->add_option("--n", prof.n, "Number of cells")->required();
    profile->add_option("--density", prof.density, "Connection density (default 1)");
    profile->add_option("--measured", prof.measure_steps, "Also count ops of the surrogate kernel over this many steps");
    profile->add_option("--seed", prof.seed, "Connectivity seed for --measured");
    profile->add_option("--unroll", prof.unroll, "DFE unroll factor");
    profile->add_option("--pipeline-depth", prof.depth, "DFE pipeline depth in ticks");
    profile->add_option("--clock-hz", prof.clock_hz, "DFE clock");
    profile->add_option("--out", prof.out, "Output path (default stdout)");

    SelectArgs sel;
    auto* select = app.add_subcommand("select", "Pick a fabric for one experiment");
    select->add_option("--case", sel.use_case, "rgj, sgj or ngj")->required()->check(CLI::IsMember(cases));
    select->add_option("--n", sel.n, "Number of cells");
    select->add_option("--density", sel.density, "Connection density (default 1, 0 for ngj)");
    select->add_flag("--real-time", sel.real_time, "Require real-time execution");
    select->add_flag("--details", sel.details, "Include the classification and real-time limits");
    select->add_flag("--rt-max", sel.rt_max, "Print the largest real-time network per fabric instead");
    select->add_option("--calibration", sel.calibration, "Calibration CSV")->check(CLI::ExistingFile);
    select->add_option("--out", sel.out, "Output path (default stdout)");

    PlanArgs pl;
    auto* plan = app.add_subcommand("plan", "Assign a batch of experiments to fabrics");
    plan->add_option("batch", pl.batch, "Batch JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("--calibration", pl.calibration, "Calibration CSV")->check(CLI::ExistingFile);
    plan->add_flag("--allow-fallback", pl.allow_fallback, "Use rule-based choices for uncovered experiments");
    plan->add_option("--format", pl.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    plan->add_option("--out", pl.out, "Output path (default stdout)");

    CalibrateArgs cal;
    auto* calibrate = app.add_subcommand("calibrate", "Time the local backends and write a calibration CSV");
    calibrate->add_option("--sweep", cal.sweep_path, "Sweep JSON")->check(CLI::ExistingFile);
    calibrate->add_option("--as", cal.label, "Fabric label for measured rows (DFE, PHI, GPU)");
    calibrate->add_option("--workers", cal.workers, "Parallel workers (1 = sequential)");
    calibrate->add_option("--cases", cal.cases, "Use cases")->delimiter(',');
    calibrate->add_option("--densities", cal.densities, "Densities")->delimiter(',');
    calibrate->add_option("--sizes", cal.sizes, "Network sizes")->delimiter(',');
    calibrate->add_option("--steps", cal.steps, "Timed steps per point");
    calibrate->add_option("--seed", cal.seed, "Connectivity seed");
    calibrate->add_option("--weight", cal.weight, "Junction weight");
    calibrate->add_flag("--dfe-model", cal.dfe_model, "Add analytic DFE rows from the tick model");
    calibrate->add_flag("--quiet", cal.quiet, "No progress output");
    calibrate->add_option("--out", cal.out, "Calibration CSV path")->required();

    GenArgs gen;
    auto* gen_conn = app.add_subcommand("gen-connectivity", "Write a connectivity matrix CSV");
    gen_conn->add_option("--kind", gen.kind, "all_to_all or fixed_density")
        ->check(CLI::IsMember({"all_to_all", "fixed_density"}));
    gen_conn->add_option("--n", gen.n, "Number of cells")->required();
    gen_conn->add_option("--p", gen.p, "Connection probability for fixed_density");
    gen_conn->add_option("--seed", gen.seed, "Generator seed");
    gen_conn->add_option("--weight", gen.weight, "Constant weight (default 0.04)");
    gen_conn->add_option("--out", gen.out, "Matrix CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*profile) return run_profile(prof);
        if (*select) return run_select(sel);
        if (*plan) return run_plan(pl);
        if (*calibrate) return run_calibrate(cal);
        if (*gen_conn) return run_gen(gen);
    } catch (const CliFailure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
