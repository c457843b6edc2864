#pragma once

// Coefficient / sample files: one line of JSON header, then N * count little-endian
// f64 (re, im) pairs, row-major with the rotation index outer.
//
//   {"N": 8, "count": 5, "kind": "coefficients", "grid": "freq.json"}\n<payload>
//
// "grid" is either a path (resolved relative to the array file) or an inline grid object.

#include <filesystem>
#include <fstream>
#include <string>

#include "se2n/bessel.hpp"
#include "se2n/grid.hpp"
#include "se2n/transform.hpp"

namespace se2n {

enum class ArrayKind { coefficients, samples };

struct ComplexArrayFile {
    ArrayKind kind = ArrayKind::samples;
    ComplexMatrix values;
    GridPtr grid;
};

/// Either a grid path to record in the header, or an empty string to inline the grid.
inline void save_complex_array(const std::string& path, ArrayKind kind, const ComplexMatrix& values,
                               const RotInvariantGrid& grid, const std::string& grid_path = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    nlohmann::json header;
    header["N"] = values.rows();
    header["count"] = values.cols();
    header["kind"] = kind == ArrayKind::coefficients ? "coefficients" : "samples";
    if (grid_path.empty())
        header["grid"] = nlohmann::json::parse(grid_to_json(grid));
    else
        header["grid"] = grid_path;
    out << header.dump() << '\n';
    for (Eigen::Index n = 0; n < values.rows(); ++n)
        for (Eigen::Index j = 0; j < values.cols(); ++j) detail::write_complex(out, values(n, j));
    if (!out) throw Error("failed writing " + path);
}

inline void save_coefficients(const std::string& path, const ApCoefficients& c, const std::string& grid_path = {}) {
    save_complex_array(path, ArrayKind::coefficients, c.values(), *c.grid(), grid_path);
}

inline void save_samples(const std::string& path, const SampleArray& s, const std::string& grid_path = {}) {
    save_complex_array(path, ArrayKind::samples, s.values(), *s.grid(), grid_path);
}

inline ComplexArrayFile load_complex_array(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header line in " + path);
    const nlohmann::json header = parse_json_text(line);
    if (!header.is_object() || !header.contains("N") || !header.contains("count") || !header.contains("grid"))
        throw ParseError("array header requires N, count and grid");
    if (!header["N"].is_number_unsigned() || !header["count"].is_number_unsigned())
        throw ParseError("array header N and count must be nonnegative integers");

    ComplexArrayFile f;
    const std::string kind = header.value("kind", std::string("samples"));
    if (kind == "coefficients")
        f.kind = ArrayKind::coefficients;
    else if (kind == "samples")
        f.kind = ArrayKind::samples;
    else
        throw ParseError("array kind must be coefficients or samples");

    const auto& g = header["grid"];
    if (g.is_string()) {
        std::filesystem::path gp = g.get<std::string>();
        if (gp.is_relative()) gp = std::filesystem::path(path).parent_path() / gp;
        f.grid = share(load_grid(gp.string()));
    } else {
        f.grid = share(grid_from_json(g));
    }

    const auto N = header["N"].get<Eigen::Index>();
    const auto count = header["count"].get<Eigen::Index>();
    if (static_cast<std::size_t>(N) != f.grid->N() || static_cast<std::size_t>(count) != f.grid->size())
        throw GridMismatch("array header shape does not match its grid");
    f.values.resize(N, count);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index j = 0; j < count; ++j) f.values(n, j) = detail::read_complex(in);
    return f;
}

inline ApCoefficients load_coefficients(const std::string& path) {
    auto f = load_complex_array(path);
    if (f.kind != ArrayKind::coefficients) throw ParseError(path + " does not hold coefficients");
    return {std::move(f.values), std::move(f.grid)};
}

inline SampleArray load_samples(const std::string& path) {
    auto f = load_complex_array(path);
    if (f.kind != ArrayKind::samples) throw ParseError(path + " does not hold samples");
    return {std::move(f.values), std::move(f.grid)};
}

}  // namespace se2n
