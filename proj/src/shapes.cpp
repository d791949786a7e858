#include "ncalab/shapes.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ncalab/grid.hpp"

namespace ncalab {

bool TargetShape::contains_seed() const {
    return size > 0 && mask[index(seed_row(size), seed_col(size))] != 0;
}

TargetShape square_target(int grid_size, int side) {
    if (side <= 0 || side > grid_size)
        throw std::invalid_argument("square_target: side must be in [1, M], got " +
                                    std::to_string(side));
    TargetShape t;
    t.size = grid_size;
    t.mask.assign(static_cast<std::size_t>(grid_size) * grid_size, 0);
    t.name = "square" + std::to_string(side);
    const int off = (grid_size - side) / 2;
    for (int r = off; r < off + side; ++r)
        for (int c = off; c < off + side; ++c) t.mask[t.index(r, c)] = 1;
    return t;
}

TargetShape triangle_target(int grid_size, int base) {
    if (base <= 0 || base > grid_size)
        throw std::invalid_argument("triangle_target: base must be in [1, M]");
    if (base % 2 == 0)
        throw std::invalid_argument("triangle_target: base must be odd for symmetric centering");
    TargetShape t;
    t.size = grid_size;
    t.mask.assign(static_cast<std::size_t>(grid_size) * grid_size, 0);
    t.name = "triangle" + std::to_string(base);
    const int rows = (base + 1) / 2;
    const int bottom = seed_row(grid_size);
    const int center = seed_col(grid_size);
    for (int r = 0; r < rows; ++r) {
        const int row = bottom - rows + 1 + r;
        for (int c = center - r; c <= center + r; ++c) t.mask[t.index(row, c)] = 1;
    }
    return t;
}

TargetShape x_target(int grid_size, int arm) {
    const int max_arm = std::min(seed_row(grid_size), grid_size - 1 - seed_row(grid_size));
    if (arm < 0 || arm > max_arm)
        throw std::invalid_argument("x_target: arm must be in [0, " + std::to_string(max_arm) +
                                    "] for M=" + std::to_string(grid_size));
    TargetShape t;
    t.size = grid_size;
    t.mask.assign(static_cast<std::size_t>(grid_size) * grid_size, 0);
    t.name = "x" + std::to_string(arm);
    const int r0 = seed_row(grid_size);
    const int c0 = seed_col(grid_size);
    t.mask[t.index(r0, c0)] = 1;
    for (int d = 1; d <= arm; ++d) {
        t.mask[t.index(r0 - d, c0 - d)] = 1;
        t.mask[t.index(r0 - d, c0 + d)] = 1;
        t.mask[t.index(r0 + d, c0 - d)] = 1;
        t.mask[t.index(r0 + d, c0 + d)] = 1;
    }
    return t;
}

namespace {

TargetShape from_rows(const std::vector<std::string>& rows, const std::string& name) {
    const int m = static_cast<int>(rows.size());
    if (m == 0) throw std::runtime_error("target parse failure: no grid rows (" + name + ")");
    TargetShape t;
    t.size = m;
    t.mask.assign(static_cast<std::size_t>(m) * m, 0);
    t.name = name;
    for (int r = 0; r < m; ++r) {
        if (static_cast<int>(rows[r].size()) != m)
            throw std::runtime_error("target dimension mismatch: row " + std::to_string(r) +
                                     " has " + std::to_string(rows[r].size()) + " cells, expected " +
                                     std::to_string(m) + " (" + name + ")");
        for (int c = 0; c < m; ++c) {
            const char ch = rows[r][c];
            if (ch != '0' && ch != '1')
                throw std::runtime_error("target parse failure: unexpected character '" +
                                         std::string(1, ch) + "' (" + name + ")");
            t.mask[t.index(r, c)] = ch == '1';
        }
    }
    return t;
}

TargetShape parse_pbm(std::istream& in, const std::string& name) {
    std::string token;
    std::vector<std::string> tokens;
    while (in >> token) {
        if (token[0] == '#') {  // comment runs to end of line
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        tokens.push_back(token);
    }
    if (tokens.size() < 3 || tokens[0] != "P1")
        throw std::runtime_error("target parse failure: not a P1 PBM (" + name + ")");
    int width = 0, height = 0;
    try {
        width = std::stoi(tokens[1]);
        height = std::stoi(tokens[2]);
    } catch (const std::exception&) {
        throw std::runtime_error("target parse failure: bad PBM dimensions (" + name + ")");
    }
    if (width != height)
        throw std::runtime_error("target dimension mismatch: PBM is " + std::to_string(width) +
                                 "x" + std::to_string(height) + ", expected square (" + name + ")");
    std::string digits;
    for (std::size_t i = 3; i < tokens.size(); ++i) digits += tokens[i];
    if (static_cast<int>(digits.size()) != width * height)
        throw std::runtime_error("target parse failure: PBM pixel count mismatch (" + name + ")");
    std::vector<std::string> rows;
    for (int r = 0; r < height; ++r) rows.push_back(digits.substr(r * width, width));
    return from_rows(rows, name);
}

}  // namespace

TargetShape load_target(const std::string& path, bool allow_seed_outside) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open target file: " + path);

    TargetShape t;
    char c = 0;
    in.get(c);
    in.putback(c);
    if (c == 'P') {
        t = parse_pbm(in, path);
    } else {
        std::vector<std::string> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            rows.push_back(line);
        }
        t = from_rows(rows, path);
    }
    if (t.cell_count() == 0) throw std::runtime_error("empty target mask: " + path);
    if (!t.contains_seed()) {
        if (!allow_seed_outside)
            throw std::runtime_error("target mask does not contain the seed cell: " + path +
                                     " (pass the override to accept it)");
        std::cerr << "warning: target mask does not contain the seed cell: " << path << "\n";
    }
    return t;
}

void save_target(const TargetShape& shape, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write target file: " + path);
    const bool pbm = path.size() >= 4 && path.compare(path.size() - 4, 4, ".pbm") == 0;
    if (pbm) out << "P1\n" << shape.size << " " << shape.size << "\n";
    for (int r = 0; r < shape.size; ++r) {
        for (int c = 0; c < shape.size; ++c) {
            if (pbm && c > 0) out << ' ';
            out << (shape.mask[shape.index(r, c)] ? '1' : '0');
        }
        out << '\n';
    }
}

TargetShape parse_target_spec(const std::string& spec, int grid_size) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("target spec must look like kind:value, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string value = spec.substr(colon + 1);
    auto parse_int = [&](const std::string& s) {
        try {
            return std::stoi(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("target spec '" + spec + "': bad number '" + s + "'");
        }
    };
    if (kind == "square") return square_target(grid_size, parse_int(value));
    if (kind == "triangle") return triangle_target(grid_size, parse_int(value));
    if (kind == "x") return x_target(grid_size, parse_int(value));
    if (kind == "file") {
        TargetShape t = load_target(value);
        if (t.size != grid_size)
            throw std::invalid_argument("target file is " + std::to_string(t.size) + "x" +
                                        std::to_string(t.size) + " but the grid is " +
                                        std::to_string(grid_size) + "x" +
                                        std::to_string(grid_size));
        return t;
    }
    throw std::invalid_argument("unknown target kind '" + kind +
                                "' (expected square, triangle, x or file)");
}

}  // namespace ncalab
