#pragma once

// File formats: connectivity matrices, traces and generic CSV helpers.
//
//   matrix  N lines of N comma-separated weights, row-major, 0 = no edge
//   trace   header `step,neuron,vaxon_mV`, one row per recorded sample
//
// Doubles are written in shortest round-trip form, so read(write(x)) == x.
// Every file is written to a temporary sibling and renamed into place.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brainframe/engine.hpp"
#include "brainframe/network.hpp"

namespace brainframe::io {

struct CsvRow {
    std::size_t line = 0; // 1-based line in the source
    std::vector<std::string> fields;
};

// Splits on newlines (LF or CRLF) and commas, trims blanks, skips empty lines.
std::vector<CsvRow> parse_csv(std::string_view text, const std::string& source);

double parse_double_field(std::string_view field, const std::string& source, std::size_t line,
                          std::size_t col);
std::uint64_t parse_uint_field(std::string_view field, const std::string& source, std::size_t line,
                               std::size_t col);
std::int64_t parse_int_field(std::string_view field, const std::string& source, std::size_t line,
                             std::size_t col);

std::string format_double(double value);

// Throws IoError.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view content);

struct ConnectivityGeneratorSpec {
    enum class Kind { all_to_all, fixed_density, from_file };
    Kind kind = Kind::all_to_all;
    double weight = 0.04;   // all_to_all and fixed_density
    double probability = 1; // fixed_density
    std::uint64_t seed = 0; // fixed_density
    std::string path;       // from_file

    static ConnectivityGeneratorSpec all_to_all(double weight);
    static ConnectivityGeneratorSpec fixed_density(double p, std::uint64_t seed, double weight);
    static ConnectivityGeneratorSpec from_file(std::string path);
};

// all_to_all: every entry = weight. fixed_density: entry (i, j) is weight
// when the (i*n + j)-th uniform draw of SeededStream(seed) is < p.
// from_file: loads the matrix and checks it is n x n.
// Throws ConfigError / ParseError / IoError.
ConnectivityMatrix generate_connectivity(const ConnectivityGeneratorSpec& spec, std::size_t n);

std::string matrix_to_csv(const ConnectivityMatrix& matrix);
ConnectivityMatrix matrix_from_csv(std::string_view text, const std::string& source = "<matrix>");
ConnectivityMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const ConnectivityMatrix& matrix);

inline constexpr std::string_view kTraceHeader = "step,neuron,vaxon_mV";

std::string trace_to_csv(const Trace& trace);
// Restores rows; metadata fields stay default.
Trace trace_from_csv(std::string_view text, const std::string& source = "<trace>");

// Writes the CSV plus `<path>.meta.json` (digest and row layout; no timings,
// so identical runs give identical files).
void write_trace(const std::string& path, const Trace& trace);
// Reads the CSV and, when present, the metadata sidecar.
Trace read_trace(const std::string& path);

} // namespace brainframe::io
