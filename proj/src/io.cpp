#include "ncalab/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ncalab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_pbm(const GridState& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write frame: " + path);
    out << "P1\n" << grid.size << " " << grid.size << "\n";
    for (int r = 0; r < grid.size; ++r) {
        for (int c = 0; c < grid.size; ++c) {
            if (c > 0) out << ' ';
            out << (grid.alive[grid.index(r, c)] ? '1' : '0');
        }
        out << '\n';
    }
}

void write_pgm(const GridState& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write frame: " + path);
    out << "P2\n" << grid.size << " " << grid.size << "\n255\n";
    for (int r = 0; r < grid.size; ++r) {
        for (int c = 0; c < grid.size; ++c) {
            if (c > 0) out << ' ';
            out << static_cast<int>(grid.signal[grid.index(r, c)]);
        }
        out << '\n';
    }
}

void export_frames(const std::vector<GridState>& grids, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < grids.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu", i);
        write_pbm(grids[i], dir + "/" + name + ".pbm");
        write_pgm(grids[i], dir + "/" + name + ".pgm");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string ascii_render(const GridState& grid) {
    static const char shades[] = " .:-=+*#%@";  // signal 0..255 over 10 levels
    std::string out;
    out.reserve(static_cast<std::size_t>(grid.size) * (grid.size + 1));
    for (int r = 0; r < grid.size; ++r) {
        for (int c = 0; c < grid.size; ++c) {
            const std::size_t i = grid.index(r, c);
            if (!grid.alive[i]) {
                out += '.';
            } else {
                const int level = grid.signal[i] * 9 / 255;
                out += shades[level] == ' ' ? 'o' : shades[level];
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace ncalab
