#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gait/types.hpp"

// Text file formats shared by the CLI and tests.
//   Points:  first line "d n", then n lines of d decimals.
//   Gram:    first line "n", then n lines of n decimals.
//   Grid:    PGM (P2 ASCII), or "d" header plus d lines of d decimals.
//   Vector:  whitespace-separated decimals.
//   Weighted points: "d n" header, then n lines of d coordinates + weight.
// All output decimals carry 12 significant digits.

namespace gait::io {

struct parse_error : std::runtime_error {
    parse_error(const std::string& file, int line, const std::string& what);
    std::string file;
    int line;
};

Eigen::MatrixXd read_points(const std::string& path);
void write_points(const std::string& path, const Eigen::MatrixXd& points);

Eigen::MatrixXd read_gram(const std::string& path);
void write_gram(const std::string& path, const Eigen::MatrixXd& gram);

Eigen::VectorXd read_vector(const std::string& path);
void write_vector(const std::string& path, const Eigen::VectorXd& v);

GridMeasure read_grid(const std::string& path);
void write_pgm(const std::string& path, const Eigen::MatrixXd& intensity, int maxval = 65535);
void write_grid_text(const std::string& path, const Eigen::MatrixXd& intensity);

EmpiricalMeasure read_weighted_points(const std::string& path);
void write_weighted_points(const std::string& path, const EmpiricalMeasure& measure);

// Joint table: first line "n m", then n lines of m decimals.
Eigen::MatrixXd read_joint_table(const std::string& path);

// "%.12g"-style formatting used for every decimal the tool emits.
std::string format_sig(double value, int digits = 12);

// CSV with the given header line; one row per entry, 12 significant digits,
// newline-terminated.
void write_trace_csv(const std::string& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> flags;  // name, value as given
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_digests;  // path -> digest
    std::string version;
    double duration_seconds = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace gait::io
