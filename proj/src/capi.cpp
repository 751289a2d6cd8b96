#include "brainframe/brainframe.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "brainframe/calibrate.hpp"
#include "brainframe/engine.hpp"
#include "brainframe/error.hpp"
#include "brainframe/io.hpp"
#include "brainframe/json_io.hpp"
#include "brainframe/planner.hpp"
#include "brainframe/profiler.hpp"
#include "brainframe/selector.hpp"

namespace bf = brainframe;
using nlohmann::json;

struct bf_config {
    bf::SimulationConfig config;
};
struct bf_trace {
    bf::Trace trace;
};
struct bf_matrix {
    bf::ConnectivityMatrix matrix;
};
struct bf_calibration {
    bf::Calibration calibration;
};

namespace {

thread_local std::string g_last_error;
thread_local std::int64_t g_last_divergence_step = -1;

bf_status fail(bf_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
bf_status guarded(Fn&& fn) noexcept {
    g_last_error.clear();
    g_last_divergence_step = -1;
    try {
        fn();
        return BF_OK;
    } catch (const bf::DivergenceError& e) {
        g_last_divergence_step = e.step();
        return fail(BF_ERR_DIVERGENCE, e.what());
    } catch (const bf::Error& e) {
        return fail(static_cast<bf_status>(static_cast<int>(e.code())), e.what());
    } catch (const json::exception& e) {
        return fail(BF_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        return fail(BF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BF_ERR_INTERNAL, "unknown error");
    }
}

char* duplicate(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool condition, const char* what) {
    if (!condition) throw std::invalid_argument(what);
}

json parse_json(const char* text) {
    require(text != nullptr, "JSON text is null");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw bf::ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

extern "C" {

const char* bf_version(void) { return "0.1.0"; }

const char* bf_last_error(void) { return g_last_error.c_str(); }

int64_t bf_last_divergence_step(void) { return g_last_divergence_step; }

void bf_string_free(char* s) { std::free(s); }

bf_status bf_config_from_json(const char* text, const char* base_dir, bf_config** out) {
    if (!out) return fail(BF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        auto doc = parse_json(text);
        *out = new bf_config{bf::json_io::config_from_json(doc, base_dir ? base_dir : "")};
    });
}

bf_status bf_config_set_workers(bf_config* config, size_t workers) {
    if (!config) return fail(BF_ERR_INVALID_ARGUMENT, "config is null");
    config->config.backend =
        workers == 0 ? bf::Backend::sequential() : bf::Backend::parallel(workers);
    return BF_OK;
}

bf_status bf_config_digest(const bf_config* config, char** out) {
    if (!config || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = duplicate(bf::config_digest(config->config)); });
}

void bf_config_free(bf_config* config) { delete config; }

bf_status bf_simulate(const bf_config* config, bf_trace** out) {
    if (!config || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new bf_trace{bf::simulate(config->config)}; });
}

size_t bf_trace_row_count(const bf_trace* trace) { return trace ? trace->trace.rows.size() : 0; }

bf_status bf_trace_row(const bf_trace* trace, size_t index, int64_t* step, uint32_t* neuron,
                       double* vaxon_mv) {
    if (!trace) return fail(BF_ERR_INVALID_ARGUMENT, "trace is null");
    if (index >= trace->trace.rows.size()) return fail(BF_ERR_INVALID_ARGUMENT, "row out of range");
    const auto& r = trace->trace.rows[index];
    if (step) *step = r.step;
    if (neuron) *neuron = r.neuron;
    if (vaxon_mv) *vaxon_mv = r.vaxon_mv;
    return BF_OK;
}

bf_status bf_trace_summary_json(const bf_trace* trace, char** out) {
    if (!trace || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& t = trace->trace;
        json doc{{"config_digest", t.config_digest},
                 {"rows", t.rows.size()},
                 {"recorded_steps", t.recorded_steps},
                 {"recorded_neurons", t.recorded_neurons},
                 {"timing",
                  {{"steps", t.timing.steps},
                   {"min_s", t.timing.min_s},
                   {"mean_s", t.timing.mean_s},
                   {"max_s", t.timing.max_s}}}};
        *out = duplicate(doc.dump());
    });
}

bf_status bf_trace_to_csv(const bf_trace* trace, char** out) {
    if (!trace || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = duplicate(bf::io::trace_to_csv(trace->trace)); });
}

bf_status bf_trace_write_csv(const bf_trace* trace, const char* path) {
    if (!trace || !path) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { bf::io::write_trace(path, trace->trace); });
}

bf_status bf_trace_read_csv(const char* path, bf_trace** out) {
    if (!path || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new bf_trace{bf::io::read_trace(path)}; });
}

void bf_trace_free(bf_trace* trace) { delete trace; }

bf_status bf_matrix_generate(const char* spec_json, size_t n, bf_matrix** out) {
    if (!out) return fail(BF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        // Reuse the config parser so the connectivity block has one schema.
        json config{{"use_case", "rgj"}, {"n", n}, {"duration_steps", 1},
                    {"connectivity", parse_json(spec_json)}};
        auto parsed = bf::json_io::config_from_json(config);
        *out = new bf_matrix{std::move(*parsed.connectivity)};
    });
}

bf_status bf_matrix_read_csv(const char* path, bf_matrix** out) {
    if (!path || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new bf_matrix{bf::io::read_matrix(path)}; });
}

bf_status bf_matrix_write_csv(const bf_matrix* matrix, const char* path) {
    if (!matrix || !path) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { bf::io::write_matrix(path, matrix->matrix); });
}

size_t bf_matrix_size(const bf_matrix* matrix) { return matrix ? matrix->matrix.n() : 0; }

double bf_matrix_density(const bf_matrix* matrix) { return matrix ? matrix->matrix.density() : 0.0; }

double bf_matrix_at(const bf_matrix* matrix, size_t row, size_t col) {
    if (!matrix || row >= matrix->matrix.n() || col >= matrix->matrix.n()) return 0.0;
    return matrix->matrix.at(row, col);
}

void bf_matrix_free(bf_matrix* matrix) { delete matrix; }

bf_status bf_profile_json(const char* use_case, uint64_t n, double density,
                          const char* dfe_model_json, int64_t measure_steps, uint64_t seed,
                          char** out) {
    if (!use_case || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto uc = bf::parse_use_case(use_case);
        if (n < 1) throw bf::ConfigError("network size must be >= 1");
        const auto model = dfe_model_json ? bf::json_io::dfe_model_from_json(parse_json(dfe_model_json))
                                          : bf::profile::DfeTickModel{};
        json doc = bf::json_io::profile_to_json(bf::profile::characterize(uc, n, density));
        doc["dfe"] = bf::json_io::dfe_estimate_to_json(uc, n, density, model);
        if (measure_steps > 0) {
            bf::SimulationConfig config;
            config.use_case = uc;
            config.n = static_cast<std::size_t>(n);
            config.duration_steps = measure_steps;
            config.record.stride = measure_steps;
            config.seed = seed;
            if (uc != bf::UseCase::ngj) {
                const auto gen = density >= 1.0
                                     ? bf::io::ConnectivityGeneratorSpec::all_to_all(0.04)
                                     : bf::io::ConnectivityGeneratorSpec::fixed_density(density, seed, 0.04);
                config.connectivity = bf::io::generate_connectivity(gen, config.n);
            }
            doc["measured"] = bf::json_io::measured_to_json(bf::profile::measure_ops(config));
        }
        *out = duplicate(doc.dump());
    });
}

bf_status bf_calibration_read_csv(const char* path, bf_calibration** out) {
    if (!path || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new bf_calibration{bf::Calibration::from_csv_file(path)}; });
}

bf_status bf_calibration_from_csv_text(const char* text, bf_calibration** out) {
    if (!text || !out) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new bf_calibration{bf::Calibration::from_csv_text(text)}; });
}

bf_status bf_calibration_write_csv(const bf_calibration* cal, const char* path) {
    if (!cal || !path) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { bf::io::write_file_atomic(path, cal->calibration.to_csv()); });
}

size_t bf_calibration_size(const bf_calibration* cal) { return cal ? cal->calibration.size() : 0; }

void bf_calibration_free(bf_calibration* cal) { delete cal; }

bf_status bf_select_json(const char* experiment_json, const bf_calibration* cal, int include_details,
                         char** out) {
    if (!out) return fail(BF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const auto spec = bf::json_io::experiment_from_json(parse_json(experiment_json));
        const auto cls = bf::classify(spec);
        const auto* calibration = cal ? &cal->calibration : nullptr;
        json doc = bf::json_io::decision_to_json(bf::select_fabric(cls, calibration));
        if (include_details) {
            doc["class"] = bf::json_io::class_to_json(cls);
            json rt = json::object();
            for (auto f : bf::kAllFabrics) {
                const auto cells = bf::rt_max_network(f, cls.use_case, cls.density, calibration);
                rt[std::string(bf::to_string(f))] = cells ? json(*cells) : json(nullptr);
            }
            doc["rt_max_network"] = std::move(rt);
        }
        *out = duplicate(doc.dump());
    });
}

bf_status bf_rt_max_network(const char* fabric, const char* use_case, double density,
                            const bf_calibration* cal, int* found, uint64_t* cells) {
    if (!fabric || !use_case || !found || !cells) return fail(BF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto result = bf::rt_max_network(bf::parse_fabric(fabric), bf::parse_use_case(use_case),
                                                density, cal ? &cal->calibration : nullptr);
        *found = result.has_value() ? 1 : 0;
        *cells = result.value_or(0);
    });
}

bf_status bf_plan(const char* batch_json, const bf_calibration* cal, int allow_rule_fallback,
                  char** out_json, char** out_text) {
    if (!out_json) return fail(BF_ERR_INVALID_ARGUMENT, "out_json is null");
    return guarded([&] {
        const auto batch = bf::json_io::batch_from_json(parse_json(batch_json));
        const bf::Calibration empty;
        const auto report = bf::plan(batch, cal ? cal->calibration : empty, allow_rule_fallback != 0);
        *out_json = duplicate(bf::json_io::plan_to_json(report).dump());
        if (out_text) *out_text = duplicate(bf::format_plan_table(report));
    });
}

bf_status bf_calibrate(const char* sweep_json, bf_progress_fn progress, void* user,
                       bf_calibration** out) {
    if (!out) return fail(BF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        const auto sweep = bf::sweep_from_json(parse_json(sweep_json));
        bf::SweepProgress cb;
        if (progress)
            cb = [&](bf::UseCase uc, double density, std::uint64_t n, double sps) {
                progress(std::string(bf::to_string(uc)).c_str(), density, n, sps, user);
            };
        *out = new bf_calibration{bf::run_calibration_sweep(sweep, cb)};
    });
}

} // extern "C"
