#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ncalab/grid.hpp"
#include "ncalab/shapes.hpp"

using namespace ncalab;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("square target: placement and counts") {
    const TargetShape t = square_target(25, 12);
    CHECK(t.cell_count() == 144);
    CHECK(t.contains_seed());
    for (int r = 6; r <= 17; ++r)
        for (int c = 6; c <= 17; ++c) CHECK(t.mask[t.index(r, c)] == 1);
    CHECK(t.mask[t.index(5, 6)] == 0);
    CHECK(t.mask[t.index(18, 17)] == 0);

    CHECK(square_target(3, 3).cell_count() == 9);

    const TargetShape big = square_target(50, 24);
    CHECK(big.cell_count() == 576);
    CHECK(big.mask[big.index(13, 13)] == 1);
    CHECK(big.mask[big.index(36, 36)] == 1);
    CHECK(big.mask[big.index(12, 13)] == 0);
    CHECK(big.mask[big.index(37, 36)] == 0);
    CHECK(big.contains_seed());

    CHECK_THROWS_AS(square_target(25, 26), std::invalid_argument);
    CHECK_THROWS_AS(square_target(25, 0), std::invalid_argument);
}

TEST_CASE("triangle target: arithmetic-series geometry on the seed row") {
    const TargetShape t = triangle_target(25, 13);
    CHECK(t.cell_count() == 49);  // 1+3+5+7+9+11+13
    CHECK(t.contains_seed());
    // bottom row is the seed row, widths shrink to the apex
    for (int r = 0; r < 7; ++r) {
        const int row = 12 - 6 + r;
        int width = 0;
        for (int c = 0; c < 25; ++c) width += t.mask[t.index(row, c)];
        CHECK(width == 2 * r + 1);
    }

    CHECK(triangle_target(25, 1).cell_count() == 1);
    CHECK(triangle_target(25, 1).mask[t.index(12, 12)] == 1);
    CHECK(triangle_target(25, 25).contains_seed());

    CHECK_THROWS_AS(triangle_target(25, 12), std::invalid_argument);  // even base
    CHECK_THROWS_AS(triangle_target(25, 27), std::invalid_argument);
}

TEST_CASE("x target: diagonals through the seed") {
    CHECK(x_target(25, 0).cell_count() == 1);
    const TargetShape t = x_target(25, 5);
    CHECK(t.cell_count() == 21);
    CHECK(t.contains_seed());

    // symmetric under 90-degree rotation about the seed
    for (int r = 0; r < 25; ++r)
        for (int c = 0; c < 25; ++c) {
            const int rr = 12 + (c - 12);
            const int cc = 12 - (r - 12);
            CHECK(t.mask[t.index(r, c)] == t.mask[t.index(rr, cc)]);
        }

    CHECK_THROWS_AS(x_target(25, 13), std::invalid_argument);
}

TEST_CASE("target files: text and PBM round-trips") {
    write_file(temp_path("single.txt"), "000\n010\n000\n");
    const TargetShape single = load_target(temp_path("single.txt"));
    CHECK(single.size == 3);
    CHECK(single.cell_count() == 1);
    CHECK(single.mask[single.index(1, 1)] == 1);

    const TargetShape square = square_target(25, 12);
    save_target(square, temp_path("square.txt"));
    CHECK(load_target(temp_path("square.txt")).mask == square.mask);
    save_target(square, temp_path("square.pbm"));
    const TargetShape from_pbm = load_target(temp_path("square.pbm"));
    CHECK(from_pbm.size == 25);
    CHECK(from_pbm.mask == square.mask);
}

TEST_CASE("target files: each failure mode is distinct") {
    write_file(temp_path("zeros.txt"), "000\n000\n000\n");
    CHECK_THROWS_WITH_AS(load_target(temp_path("zeros.txt")),
                         doctest::Contains("empty target mask"), std::runtime_error);

    write_file(temp_path("ragged.txt"), "000\n0100\n000\n");
    CHECK_THROWS_WITH_AS(load_target(temp_path("ragged.txt")),
                         doctest::Contains("dimension mismatch"), std::runtime_error);

    write_file(temp_path("junk.txt"), "000\n0x0\n000\n");
    CHECK_THROWS_WITH_AS(load_target(temp_path("junk.txt")), doctest::Contains("parse failure"),
                         std::runtime_error);

    CHECK_THROWS_AS(load_target(temp_path("does_not_exist.txt")), std::runtime_error);

    // seed cell outside the mask: rejected unless overridden
    write_file(temp_path("offseed.txt"), "100\n000\n000\n");
    CHECK_THROWS_WITH_AS(load_target(temp_path("offseed.txt")),
                         doctest::Contains("seed cell"), std::runtime_error);
    const TargetShape forced = load_target(temp_path("offseed.txt"), true);
    CHECK(forced.cell_count() == 1);
}

TEST_CASE("target spec strings") {
    CHECK(parse_target_spec("square:12", 25).cell_count() == 144);
    CHECK(parse_target_spec("triangle:13", 25).cell_count() == 49);
    CHECK(parse_target_spec("x:5", 25).cell_count() == 21);

    const TargetShape square = square_target(25, 12);
    save_target(square, temp_path("spec.txt"));
    CHECK(parse_target_spec("file:" + temp_path("spec.txt"), 25).mask == square.mask);
    CHECK_THROWS_AS(parse_target_spec("file:" + temp_path("spec.txt"), 50),
                    std::invalid_argument);

    CHECK_THROWS_AS(parse_target_spec("blob:3", 25), std::invalid_argument);
    CHECK_THROWS_AS(parse_target_spec("square", 25), std::invalid_argument);
    CHECK_THROWS_AS(parse_target_spec("square:x", 25), std::invalid_argument);
}

TEST_CASE("the bundled biped target loads") {
    const TargetShape biped = load_target(std::string(NCALAB_SOURCE_DIR) + "/data/biped.txt");
    CHECK(biped.size == 25);
    CHECK(biped.contains_seed());
    CHECK(biped.cell_count() > 100);
}
