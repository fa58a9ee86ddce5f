#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "nlsist/grid.hpp"

namespace nlsist {

/// CSV field format: header "index,x,re,im", one row per node.
inline void write_field_csv(const std::string& path, const ComplexField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    out << "index,x,re,im\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << i << ',' << f.grid.node(i) << ',' << f.values[i].real() << ','
            << f.values[i].imag() << '\n';
    }
}

inline ComplexField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_field_csv: empty file " + path);
    std::vector<double> xs;
    std::vector<complex> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double col[4] = {0, 0, 0, 0};
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("read_field_csv: bad row");
            col[c] = std::stod(tok);
        }
        xs.push_back(col[1]);
        vals.emplace_back(col[2], col[3]);
    }
    if (xs.size() < 2) throw std::runtime_error("read_field_csv: need at least 2 rows");
    double spacing = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    return ComplexField(Grid1D(xs.front(), spacing, xs.size()), std::move(vals));
}

/// Binary format: 24-byte header (origin f64, spacing f64, count u64,
/// little-endian) followed by interleaved re/im f64 pairs.
inline void write_field_bin(const std::string& path, const ComplexField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field_bin: cannot open " + path);
    double origin = f.grid.origin, spacing = f.grid.spacing;
    std::uint64_t count = f.grid.count;
    out.write(reinterpret_cast<const char*>(&origin), 8);
    out.write(reinterpret_cast<const char*>(&spacing), 8);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(16 * f.values.size()));
}

inline ComplexField read_field_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field_bin: cannot open " + path);
    double origin = 0, spacing = 0;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&origin), 8);
    in.read(reinterpret_cast<char*>(&spacing), 8);
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in) throw std::runtime_error("read_field_bin: truncated header in " + path);
    std::vector<complex> vals(count);
    in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(16 * count));
    if (!in) throw std::runtime_error("read_field_bin: truncated data in " + path);
    return ComplexField(Grid1D(origin, spacing, count), std::move(vals));
}

}  // namespace nlsist
