#include "brainframe/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "brainframe/error.hpp"
#include "brainframe/rng.hpp"

namespace brainframe::io {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && blank(s.back())) s.remove_suffix(1);
    return s;
}

} // namespace

std::vector<CsvRow> parse_csv(std::string_view text, const std::string& /*source*/) {
    std::vector<CsvRow> rows;
    std::size_t line = 0;
    while (!text.empty()) {
        ++line;
        const auto eol = text.find('\n');
        std::string_view raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        raw = trim(raw);
        if (raw.empty()) continue;
        CsvRow row;
        row.line = line;
        std::size_t start = 0;
        while (true) {
            const auto comma = raw.find(',', start);
            row.fields.emplace_back(trim(raw.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_double_field(std::string_view field, const std::string& source, std::size_t line,
                          std::size_t col) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw ParseError(source, line, col, "not a number: '" + std::string(field) + "'");
    if (!std::isfinite(value)) throw ParseError(source, line, col, "value must be finite");
    return value;
}

std::uint64_t parse_uint_field(std::string_view field, const std::string& source, std::size_t line,
                               std::size_t col) {
    std::uint64_t value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw ParseError(source, line, col, "not a non-negative integer: '" + std::string(field) + "'");
    return value;
}

std::int64_t parse_int_field(std::string_view field, const std::string& source, std::size_t line,
                             std::size_t col) {
    std::int64_t value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw ParseError(source, line, col, "not an integer: '" + std::string(field) + "'");
    return value;
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return std::move(ss).str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("error while writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
    }
}

// ---------------------------------------------------------------------------
// Connectivity

ConnectivityGeneratorSpec ConnectivityGeneratorSpec::all_to_all(double weight) {
    ConnectivityGeneratorSpec s;
    s.kind = Kind::all_to_all;
    s.weight = weight;
    return s;
}

ConnectivityGeneratorSpec ConnectivityGeneratorSpec::fixed_density(double p, std::uint64_t seed,
                                                                   double weight) {
    ConnectivityGeneratorSpec s;
    s.kind = Kind::fixed_density;
    s.probability = p;
    s.seed = seed;
    s.weight = weight;
    return s;
}

ConnectivityGeneratorSpec ConnectivityGeneratorSpec::from_file(std::string path) {
    ConnectivityGeneratorSpec s;
    s.kind = Kind::from_file;
    s.path = std::move(path);
    return s;
}

ConnectivityMatrix generate_connectivity(const ConnectivityGeneratorSpec& spec, std::size_t n) {
    using Kind = ConnectivityGeneratorSpec::Kind;
    if (n < 1) throw ConfigError("network size must be >= 1");
    switch (spec.kind) {
    case Kind::all_to_all: return ConnectivityMatrix::all_to_all(n, spec.weight);
    case Kind::fixed_density: {
        if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
            throw ConfigError("connection probability must lie in [0, 1]");
        if (!std::isfinite(spec.weight) || !(spec.weight > 0.0))
            throw ConfigError("connection weight must be finite and positive");
        std::vector<double> w(n * n, 0.0);
        SeededStream stream(spec.seed);
        for (auto& entry : w)
            if (stream.uniform01() < spec.probability) entry = spec.weight;
        return ConnectivityMatrix(n, std::move(w));
    }
    case Kind::from_file: {
        auto m = read_matrix(spec.path);
        if (m.n() != n)
            throw ConfigError("matrix file '" + spec.path + "' is " + std::to_string(m.n()) + "x" +
                              std::to_string(m.n()) + ", network has " + std::to_string(n) +
                              " cells");
        return m;
    }
    }
    throw ConfigError("unknown connectivity kind");
}

std::string matrix_to_csv(const ConnectivityMatrix& matrix) {
    std::string out;
    const std::size_t n = matrix.n();
    out.reserve(n * n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out += ',';
            out += format_double(row[j]);
        }
        out += '\n';
    }
    return out;
}

ConnectivityMatrix matrix_from_csv(std::string_view text, const std::string& source) {
    const auto rows = parse_csv(text, source);
    if (rows.empty()) throw ParseError(source, 1, 0, "empty matrix");
    const std::size_t n = rows.size();
    std::vector<double> w;
    w.reserve(n * n);
    for (const auto& row : rows) {
        if (row.fields.size() != n)
            throw ParseError(source, row.line, 0,
                             "expected " + std::to_string(n) + " weights, found " +
                                 std::to_string(row.fields.size()));
        for (std::size_t j = 0; j < n; ++j) {
            const double v = parse_double_field(row.fields[j], source, row.line, j + 1);
            if (v < 0.0) throw ParseError(source, row.line, j + 1, "weights must be non-negative");
            w.push_back(v);
        }
    }
    return ConnectivityMatrix(n, std::move(w));
}

ConnectivityMatrix read_matrix(const std::string& path) {
    return matrix_from_csv(read_file(path), path);
}

void write_matrix(const std::string& path, const ConnectivityMatrix& matrix) {
    write_file_atomic(path, matrix_to_csv(matrix));
}

// ---------------------------------------------------------------------------
// Traces

std::string trace_to_csv(const Trace& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    out.reserve(out.size() + trace.rows.size() * 32);
    for (const auto& r : trace.rows) {
        out += std::to_string(r.step);
        out += ',';
        out += std::to_string(r.neuron);
        out += ',';
        out += format_double(r.vaxon_mv);
        out += '\n';
    }
    return out;
}

Trace trace_from_csv(std::string_view text, const std::string& source) {
    const auto rows = parse_csv(text, source);
    if (rows.empty() || rows.front().fields.size() != 3 || rows.front().fields[0] != "step" ||
        rows.front().fields[1] != "neuron" || rows.front().fields[2] != "vaxon_mV")
        throw ParseError(source, rows.empty() ? 1 : rows.front().line, 0,
                         "expected header '" + std::string(kTraceHeader) + "'");
    Trace trace;
    trace.rows.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3)
            throw ParseError(source, row.line, 0,
                             "expected 3 fields, found " + std::to_string(row.fields.size()));
        TraceRow t;
        t.step = parse_int_field(row.fields[0], source, row.line, 1);
        const auto neuron = parse_uint_field(row.fields[1], source, row.line, 2);
        if (neuron > std::numeric_limits<std::uint32_t>::max())
            throw ParseError(source, row.line, 2, "neuron index out of range");
        t.neuron = static_cast<std::uint32_t>(neuron);
        t.vaxon_mv = parse_double_field(row.fields[2], source, row.line, 3);
        trace.rows.push_back(t);
    }
    return trace;
}

void write_trace(const std::string& path, const Trace& trace) {
    write_file_atomic(path, trace_to_csv(trace));
    nlohmann::json meta{{"config_digest", trace.config_digest},
                        {"rows", trace.rows.size()},
                        {"recorded_steps", trace.recorded_steps},
                        {"recorded_neurons", trace.recorded_neurons}};
    write_file_atomic(path + ".meta.json", meta.dump(2) + "\n");
}

Trace read_trace(const std::string& path) {
    Trace trace = trace_from_csv(read_file(path), path);
    const std::string meta_path = path + ".meta.json";
    if (fs::exists(meta_path)) {
        try {
            const auto meta = nlohmann::json::parse(read_file(meta_path));
            trace.config_digest = meta.value("config_digest", std::string{});
            trace.recorded_steps = meta.value("recorded_steps", std::int64_t{0});
            trace.recorded_neurons = meta.value("recorded_neurons", std::size_t{0});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(meta_path, 1, 0, e.what());
        }
    }
    return trace;
}

} // namespace brainframe::io
