#include "homoglab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace homoglab {

static_assert(std::endian::native == std::endian::little,
              "binary field format assumes a little-endian host");

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FieldView {
    Grid grid;
    std::vector<const std::vector<double>*> planes;
    std::vector<std::string> names;
};

void write_csv(const FieldView& fv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const Grid& g = fv.grid;
    out << "dim," << g.dim << "\n";
    out << "cells," << g.cells[0] << "," << g.cells[1] << "\n";
    out << "cells_per_unit," << g.cells_per_unit << "\n";
    out << "origin," << fmt17(g.origin[0]) << "," << fmt17(g.origin[1]) << "\n";
    out << "h," << fmt17(g.spacing()) << "\n";
    out << "components";
    for (const auto& n : fv.names) out << "," << n;
    out << "\n";
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        for (std::size_t c = 0; c < fv.planes.size(); ++c) {
            if (c) out << ",";
            out << fmt17((*fv.planes[c])[static_cast<std::size_t>(i)]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

struct ParsedCsv {
    Grid grid;
    std::vector<std::vector<double>> planes;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

ParsedCsv read_csv(const std::string& path, std::size_t expected_comp) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    ParsedCsv r;
    Grid& g = r.grid;
    std::string line;
    std::size_t ncomp = 0;
    // header
    while (std::getline(in, line)) {
        auto parts = split(line);
        if (parts.empty()) continue;
        const std::string& key = parts[0];
        if (key == "dim") {
            g.dim = std::stoi(parts.at(1));
        } else if (key == "cells") {
            g.cells[0] = std::stoi(parts.at(1));
            g.cells[1] = std::stoi(parts.at(2));
        } else if (key == "cells_per_unit") {
            g.cells_per_unit = std::stoi(parts.at(1));
        } else if (key == "origin") {
            g.origin[0] = std::stod(parts.at(1));
            g.origin[1] = std::stod(parts.at(2));
        } else if (key == "h") {
            // redundant with cells_per_unit; validated below
            const double h = std::stod(parts.at(1));
            if (std::fabs(h * g.cells_per_unit - 1.0) > 1e-12)
                throw IoError("inconsistent h in " + path);
        } else if (key == "components") {
            ncomp = parts.size() - 1;
            break;
        } else {
            throw IoError("unknown CSV header key '" + key + "' in " + path);
        }
    }
    g.validate();
    if (ncomp != expected_comp)
        throw IoError("unexpected component count in " + path);
    r.planes.assign(ncomp, {});
    const auto nc = static_cast<std::size_t>(g.cell_count());
    for (auto& p : r.planes) p.reserve(nc);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split(line);
        if (parts.size() != ncomp) throw IoError("malformed data row in " + path);
        for (std::size_t c = 0; c < ncomp; ++c)
            r.planes[c].push_back(std::stod(parts[c]));
    }
    for (const auto& p : r.planes)
        if (p.size() != nc) throw IoError("cell count mismatch in " + path);
    return r;
}

#pragma pack(push, 1)
struct BinHeader {
    char magic[4];
    std::uint16_t version;
    std::uint16_t dim;
    std::uint16_t ncomp;
    std::uint16_t cells_per_unit;
    std::uint32_t cells0;
    std::uint32_t cells1;
    std::int32_t origin_cells0;  ///< origin / h, exact for grid-aligned origins
    std::int32_t origin_cells1;
    std::uint32_t pad;
};
#pragma pack(pop)
static_assert(sizeof(BinHeader) == 32);

void write_binary(const FieldView& fv, const std::string& path) {
    const Grid& g = fv.grid;
    const double h = g.spacing();
    BinHeader hd{};
    std::memcpy(hd.magic, "HGLF", 4);
    hd.version = 1;
    hd.dim = static_cast<std::uint16_t>(g.dim);
    hd.ncomp = static_cast<std::uint16_t>(fv.planes.size());
    hd.cells_per_unit = static_cast<std::uint16_t>(g.cells_per_unit);
    hd.cells0 = static_cast<std::uint32_t>(g.cells[0]);
    hd.cells1 = static_cast<std::uint32_t>(g.cells[1]);
    hd.origin_cells0 = static_cast<std::int32_t>(std::llround(g.origin[0] / h));
    hd.origin_cells1 = static_cast<std::int32_t>(std::llround(g.origin[1] / h));
    if (std::fabs(hd.origin_cells0 * h - g.origin[0]) > 1e-12 ||
        std::fabs(hd.origin_cells1 * h - g.origin[1]) > 1e-12)
        throw IoError("binary format requires a grid-aligned origin");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(&hd), sizeof(hd));
    for (const auto* p : fv.planes)
        out.write(reinterpret_cast<const char*>(p->data()),
                  static_cast<std::streamsize>(p->size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path);
}

struct ParsedBin {
    Grid grid;
    std::vector<std::vector<double>> planes;
};

ParsedBin read_binary(const std::string& path, std::size_t expected_comp) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    BinHeader hd{};
    in.read(reinterpret_cast<char*>(&hd), sizeof(hd));
    if (!in || std::memcmp(hd.magic, "HGLF", 4) != 0 || hd.version != 1)
        throw IoError("bad binary field header in " + path);
    ParsedBin r;
    Grid& g = r.grid;
    g.dim = hd.dim;
    g.cells_per_unit = hd.cells_per_unit;
    g.cells = {static_cast<int>(hd.cells0), static_cast<int>(hd.cells1)};
    g.origin = {hd.origin_cells0 * g.spacing(), hd.origin_cells1 * g.spacing()};
    g.validate();
    if (hd.ncomp != expected_comp)
        throw IoError("unexpected component count in " + path);
    const auto nc = static_cast<std::size_t>(g.cell_count());
    r.planes.assign(hd.ncomp, std::vector<double>(nc));
    for (auto& p : r.planes) {
        in.read(reinterpret_cast<char*>(p.data()),
                static_cast<std::streamsize>(nc * sizeof(double)));
        if (!in) throw IoError("truncated binary field: " + path);
    }
    return r;
}

} // namespace

void save_csv(const ScalarField& f, const std::string& path) {
    write_csv({f.grid, {&f.values}, {"value"}}, path);
}

void save_csv(const MatrixField& f, const std::string& path) {
    if (f.grid.dim == 1)
        write_csv({f.grid, {&f.a00}, {"a00"}}, path);
    else
        write_csv({f.grid, {&f.a00, &f.a11, &f.a01}, {"a00", "a11", "a01"}}, path);
}

ScalarField load_scalar_csv(const std::string& path) {
    auto r = read_csv(path, 1);
    ScalarField f(r.grid);
    f.values = std::move(r.planes[0]);
    return f;
}

MatrixField load_matrix_csv(const std::string& path) {
    // peek the dimension first: 1-d matrices store one plane
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    const bool one_d = line == "dim,1";
    in.close();
    auto r = read_csv(path, one_d ? 1 : 3);
    MatrixField f(r.grid);
    f.a00 = std::move(r.planes[0]);
    if (!one_d) {
        f.a11 = std::move(r.planes[1]);
        f.a01 = std::move(r.planes[2]);
    }
    return f;
}

void save_binary(const ScalarField& f, const std::string& path) {
    write_binary({f.grid, {&f.values}, {"value"}}, path);
}

void save_binary(const MatrixField& f, const std::string& path) {
    if (f.grid.dim == 1)
        write_binary({f.grid, {&f.a00}, {"a00"}}, path);
    else
        write_binary({f.grid, {&f.a00, &f.a11, &f.a01}, {"a00", "a11", "a01"}}, path);
}

ScalarField load_scalar_binary(const std::string& path) {
    auto r = read_binary(path, 1);
    ScalarField f(r.grid);
    f.values = std::move(r.planes[0]);
    return f;
}

MatrixField load_matrix_binary(const std::string& path) {
    // peek the dimension to know how many planes to expect
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    std::uint16_t ver = 0, dim = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), 2);
    in.read(reinterpret_cast<char*>(&dim), 2);
    in.close();
    auto r = read_binary(path, dim == 1 ? 1 : 3);
    MatrixField f(r.grid);
    f.a00 = std::move(r.planes[0]);
    if (dim != 1) {
        f.a11 = std::move(r.planes[1]);
        f.a01 = std::move(r.planes[2]);
    }
    return f;
}

} // namespace homoglab
