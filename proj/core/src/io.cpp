#include "gait/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace gait::io {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

// Line-oriented tokenizer that tracks the current line for diagnostics.
struct LineReader {
    std::ifstream in;
    std::string path;
    int line_number = 0;

    LineReader(std::string p) : in(open_in(p)), path(std::move(p)) {}

    // Next non-empty, non-comment line.
    bool next_line(std::string& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_number;
            const auto first = line.find_first_not_of(" \t\r\n");
            if (first == std::string::npos) continue;
            if (line[first] == '#') continue;
            out = line;
            return true;
        }
        return false;
    }

    std::vector<double> numbers_on_line(int expected) {
        std::string line;
        if (!next_line(line))
            throw parse_error(path, line_number + 1, "unexpected end of file");
        std::istringstream ss(line);
        std::vector<double> values;
        double v;
        while (ss >> v) values.push_back(v);
        if (!ss.eof()) {
            std::string bad;
            ss.clear();
            ss >> bad;
            throw parse_error(path, line_number, "invalid number '" + bad + "'");
        }
        if (expected >= 0 && static_cast<int>(values.size()) != expected)
            throw parse_error(path, line_number,
                              "expected " + std::to_string(expected) + " values, found " +
                                  std::to_string(values.size()));
        return values;
    }
};

}  // namespace

parse_error::parse_error(const std::string& file_, int line_, const std::string& what)
    : std::runtime_error(file_ + ":" + std::to_string(line_) + ": " + what),
      file(file_),
      line(line_) {}

std::string format_sig(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

Eigen::MatrixXd read_points(const std::string& path) {
    LineReader reader(path);
    const std::vector<double> header = reader.numbers_on_line(2);
    const int d = static_cast<int>(header[0]);
    const int n = static_cast<int>(header[1]);
    if (d < 1 || n < 1 || header[0] != d || header[1] != n)
        throw parse_error(path, reader.line_number, "header must be two positive integers 'd n'");
    Eigen::MatrixXd points(n, d);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> row = reader.numbers_on_line(d);
        for (int j = 0; j < d; ++j) points(i, j) = row[j];
    }
    if (!points.allFinite()) throw parse_error(path, reader.line_number, "non-finite coordinate");
    return points;
}

void write_points(const std::string& path, const Eigen::MatrixXd& points) {
    std::ofstream out = open_out(path);
    out << points.cols() << " " << points.rows() << "\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            out << (j ? " " : "") << format_sig(points(i, j));
        out << "\n";
    }
}

Eigen::MatrixXd read_gram(const std::string& path) {
    LineReader reader(path);
    const std::vector<double> header = reader.numbers_on_line(1);
    const int n = static_cast<int>(header[0]);
    if (n < 1 || header[0] != n)
        throw parse_error(path, reader.line_number, "header must be a positive integer 'n'");
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> row = reader.numbers_on_line(n);
        for (int j = 0; j < n; ++j) gram(i, j) = row[j];
    }
    return gram;
}

void write_gram(const std::string& path, const Eigen::MatrixXd& gram) {
    std::ofstream out = open_out(path);
    out << gram.rows() << "\n";
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            out << (j ? " " : "") << format_sig(gram(i, j));
        out << "\n";
    }
}

Eigen::VectorXd read_vector(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw parse_error(path, -1, "invalid number in vector file");
    if (values.empty()) throw parse_error(path, 1, "empty vector file");
    return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << format_sig(v[i]) << "\n";
}

GridMeasure read_grid(const std::string& path) {
    LineReader reader(path);
    std::string first;
    if (!reader.next_line(first)) throw parse_error(path, 1, "empty grid file");

    std::istringstream head(first);
    std::string magic;
    head >> magic;
    if (magic == "P2") {
        // ASCII PGM; dimensions and maxval may share lines with pixels.
        std::vector<double> values;
        std::string token;
        while (head >> token) values.push_back(std::stod(token));
        std::string line;
        while (reader.next_line(line)) {
            std::istringstream ss(line);
            while (ss >> token) values.push_back(std::stod(token));
        }
        if (values.size() < 3) throw parse_error(path, reader.line_number, "truncated PGM header");
        const int width = static_cast<int>(values[0]);
        const int height = static_cast<int>(values[1]);
        if (width != height)
            throw parse_error(path, reader.line_number, "grid measures must be square");
        if (values.size() != 3 + static_cast<std::size_t>(width) * height)
            throw parse_error(path, reader.line_number, "PGM pixel count mismatch");
        Eigen::MatrixXd intensity(height, width);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                intensity(r, c) = values[3 + static_cast<std::size_t>(r) * width + c];
        return GridMeasure::from_intensity(std::move(intensity));
    }

    // Decimal format: "d" header then d rows of d intensities.
    std::istringstream ss(first);
    int d = 0;
    ss >> d;
    if (!ss || d < 1) throw parse_error(path, reader.line_number, "grid header must be 'd' or P2");
    Eigen::MatrixXd intensity(d, d);
    for (int r = 0; r < d; ++r) {
        const std::vector<double> row = reader.numbers_on_line(d);
        for (int c = 0; c < d; ++c) intensity(r, c) = row[c];
    }
    return GridMeasure::from_intensity(std::move(intensity));
}

void write_pgm(const std::string& path, const Eigen::MatrixXd& intensity, int maxval) {
    std::ofstream out = open_out(path);
    const double top = intensity.maxCoeff();
    out << "P2\n" << intensity.cols() << " " << intensity.rows() << "\n" << maxval << "\n";
    for (Eigen::Index r = 0; r < intensity.rows(); ++r) {
        for (Eigen::Index c = 0; c < intensity.cols(); ++c) {
            const long level =
                top > 0.0 ? std::lround(intensity(r, c) / top * maxval) : 0;
            out << (c ? " " : "") << level;
        }
        out << "\n";
    }
}

void write_grid_text(const std::string& path, const Eigen::MatrixXd& intensity) {
    std::ofstream out = open_out(path);
    out << intensity.rows() << "\n";
    for (Eigen::Index r = 0; r < intensity.rows(); ++r) {
        for (Eigen::Index c = 0; c < intensity.cols(); ++c)
            out << (c ? " " : "") << format_sig(intensity(r, c));
        out << "\n";
    }
}

EmpiricalMeasure read_weighted_points(const std::string& path) {
    LineReader reader(path);
    const std::vector<double> header = reader.numbers_on_line(2);
    const int d = static_cast<int>(header[0]);
    const int n = static_cast<int>(header[1]);
    if (d < 1 || n < 1)
        throw parse_error(path, reader.line_number, "header must be two positive integers 'd n'");
    Eigen::MatrixXd atoms(n, d);
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> row = reader.numbers_on_line(d + 1);
        for (int j = 0; j < d; ++j) atoms(i, j) = row[j];
        weights[i] = row[d];
    }
    // Weights in the file carry 12 significant digits; renormalize the small
    // quantization drift, but reject anything that is not close to a simplex.
    const double mass = weights.sum();
    if (!std::isfinite(mass) || std::abs(mass - 1.0) > 1e-9 || weights.minCoeff() < -1e-9)
        throw parse_error(path, reader.line_number, "weights do not form a distribution");
    weights = weights.cwiseMax(0.0) / weights.cwiseMax(0.0).sum();
    return EmpiricalMeasure::from_parts(std::move(atoms), std::move(weights));
}

void write_weighted_points(const std::string& path, const EmpiricalMeasure& measure) {
    std::ofstream out = open_out(path);
    out << measure.dim() << " " << measure.count() << "\n";
    for (int i = 0; i < measure.count(); ++i) {
        for (int j = 0; j < measure.dim(); ++j) out << format_sig(measure.atoms(i, j)) << " ";
        out << format_sig(measure.weights[i]) << "\n";
    }
}

Eigen::MatrixXd read_joint_table(const std::string& path) {
    LineReader reader(path);
    const std::vector<double> header = reader.numbers_on_line(2);
    const int n = static_cast<int>(header[0]);
    const int m = static_cast<int>(header[1]);
    if (n < 1 || m < 1)
        throw parse_error(path, reader.line_number, "header must be two positive integers 'n m'");
    Eigen::MatrixXd table(n, m);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> row = reader.numbers_on_line(m);
        for (int j = 0; j < m; ++j) table(i, j) = row[j];
    }
    return table;
}

void write_trace_csv(const std::string& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path);
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_sig(row[i]);
        out << "\n";
    }
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json obj;
    obj["subcommand"] = manifest.subcommand;
    nlohmann::json flags = nlohmann::json::object();
    for (const auto& [name, value] : manifest.flags) flags[name] = value;
    obj["flags"] = flags;
    obj["seed"] = manifest.seed;
    obj["input_digests"] = manifest.input_digests;
    obj["version"] = manifest.version;
    obj["duration_seconds"] = manifest.duration_seconds;
    std::ofstream out = open_out(path);
    out << obj.dump(2) << "\n";
}

}  // namespace gait::io
