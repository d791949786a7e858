#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ncalab/evolution.hpp"
#include "ncalab/metrics.hpp"
#include "ncalab/rng.hpp"
#include "oracles.hpp"

using namespace ncalab;

namespace {

Genome fire_genome() {
    Genome g;
    g.bias = {1, 1, 1, 1, 0};
    return g;
}

}  // namespace

TEST_CASE("extended loss series: frozen cases and length") {
    // the zero genome holds the single-cell target forever
    const auto on_target = extended_loss_series(Genome{}, 25, 50, 50, x_target(25, 0));
    CHECK(on_target.size() == 100);
    for (const auto& p : on_target) CHECK(p.loss == 0.0);

    const auto off_target = extended_loss_series(Genome{}, 25, 50, 25, square_target(25, 12));
    CHECK(off_target.size() == 75);
    for (const auto& p : off_target)
        CHECK(p.loss == doctest::Approx(143.0 / 625.0).epsilon(1e-13));
    CHECK(off_target.front().step == 1);
    CHECK(off_target.back().step == 75);
}

TEST_CASE("stability slope: exact lines and the closed-form oracle") {
    std::vector<LossPoint> constant;
    for (int n = 1; n <= 20; ++n) constant.push_back({n, 0.25});
    CHECK(stability_slope(constant, 1, 20) == 0.0);

    std::vector<LossPoint> line;
    for (int n = 1; n <= 30; ++n) line.push_back({n, 0.001 * n});
    CHECK(stability_slope(line, 5, 25) == doctest::Approx(0.001).epsilon(1e-12));

    Rng rng(17);
    std::vector<LossPoint> noisy;
    std::vector<double> xs, ys;
    for (int n = 1; n <= 40; ++n) {
        const double y = rng.next_double();
        noisy.push_back({n, y});
        if (n >= 10 && n <= 35) {
            xs.push_back(n);
            ys.push_back(y);
        }
    }
    CHECK(std::abs(stability_slope(noisy, 10, 35) - oracles::closed_form_slope(xs, ys)) < 1e-12);

    CHECK_THROWS_AS(stability_slope(line, 7, 7), std::invalid_argument);
    CHECK_THROWS_AS(stability_slope(line, 50, 60), std::invalid_argument);
}

TEST_CASE("instability: fixed points score zero, otherwise it recounts mask flips") {
    CHECK(instability(Genome{}, 25, 50) == 0.0);
    // the all-fire genome fills the grid long before step N and stays full
    CHECK(instability(fire_genome(), 15, 30,
                      {DeathRule::LiteralReplicate, UpdateMode::InPlaceRaster}) == 0.0);

    Rng rng(301);
    for (int trial = 0; trial < 6; ++trial) {
        const Genome g = random_genome(rng, trial);
        const RolloutTrace t = rollout(g, 15, 40, true);
        int diff = 0;
        for (std::size_t i = 0; i < t.grids[20].alive.size(); ++i)
            diff += t.grids[40].alive[i] != t.grids[20].alive[i];
        CHECK(instability(g, 15, 20) == doctest::Approx(diff / 225.0).epsilon(1e-13));
    }
}

TEST_CASE("mask distance: inverted masks are maximally distant") {
    GridState a(5), b(5);
    for (std::size_t i = 0; i < a.alive.size(); ++i) a.alive[i] = i % 2;
    for (std::size_t i = 0; i < b.alive.size(); ++i) b.alive[i] = 1 - i % 2;
    CHECK(normalized_mask_distance(a, b) == 1.0);
    CHECK(normalized_mask_distance(a, a) == 0.0);
    CHECK_THROWS_AS(normalized_mask_distance(a, GridState(6)), std::invalid_argument);
}

TEST_CASE("transiency: growth-only, scripted flips and the recount oracle") {
    const RolloutTrace growth =
        rollout(fire_genome(), 15, 20, true, {DeathRule::LiteralReplicate,
                                              UpdateMode::InPlaceRaster});
    const Transiency zero = transiency(growth);
    CHECK(zero.total == 0);
    CHECK(zero.mean_per_cell == 0.0);
    CHECK_FALSE(zero.degenerate);

    // one cell: alive at n=3, dead at n=5, alive at n=7, stable after
    RolloutTrace scripted;
    scripted.grid_size = 3;
    scripted.steps = 9;
    for (int n = 0; n <= 9; ++n) {
        GridState g(3);
        const bool alive = (n >= 3 && n <= 4) || n >= 7;
        g.alive[g.index(1, 1)] = alive;
        scripted.grids.push_back(g);
    }
    const Transiency seq = transiency(scripted);
    CHECK(seq.total == 2);
    CHECK(seq.mean_per_cell == 2.0);

    RolloutTrace all_dead;
    all_dead.grid_size = 3;
    all_dead.steps = 2;
    all_dead.grids.assign(3, GridState(3));
    CHECK(transiency(all_dead).degenerate);
    CHECK(transiency(all_dead).total == 0);

    Rng rng(302);
    for (int trial = 0; trial < 6; ++trial) {
        const Genome g = random_genome(rng, trial);
        const RolloutTrace t = rollout(g, 13, 30, true);
        const auto [mean, total] = oracles::recount_transiency(t.grids);
        const Transiency got = transiency(t);
        CHECK(got.total == total);
        CHECK(got.mean_per_cell == doctest::Approx(mean).epsilon(1e-13));
    }
}

TEST_CASE("connected components: adjacency rule and invariances") {
    GridState block(25);
    const TargetShape square = square_target(25, 12);
    block.alive = square.mask;
    CHECK(connected_components(block) == 1);

    CHECK(connected_components(GridState(25)) == 0);

    GridState diagonal(5);
    diagonal.alive[diagonal.index(1, 1)] = 1;
    diagonal.alive[diagonal.index(2, 2)] = 1;
    CHECK(connected_components(diagonal) == 2);
    CHECK(connected_components(diagonal, Connectivity::Eight) == 1);

    Rng rng(303);
    GridState random_grid(11);
    for (auto& a : random_grid.alive) a = rng.below(3) == 0;
    const int components = connected_components(random_grid);
    GridState transposed(11), rotated(11);
    for (int r = 0; r < 11; ++r)
        for (int c = 0; c < 11; ++c) {
            transposed.alive[transposed.index(c, r)] = random_grid.alive[random_grid.index(r, c)];
            rotated.alive[rotated.index(c, 10 - r)] = random_grid.alive[random_grid.index(r, c)];
        }
    CHECK(connected_components(transposed) == components);
    CHECK(connected_components(rotated) == components);
}

TEST_CASE("boundary proportion") {
    GridState interior(25);
    interior.alive = square_target(25, 12).mask;
    CHECK(boundary_proportion(interior) == 0.0);

    GridState full(25);
    for (auto& a : full.alive) a = 1;
    CHECK(boundary_proportion(full) == doctest::Approx(96.0 / 625.0).epsilon(1e-13));

    GridState corner(25);
    corner.alive[corner.index(0, 0)] = 1;
    CHECK(boundary_proportion(corner) == 1.0);

    CHECK(boundary_proportion(GridState(25)) == 0.0);
}

TEST_CASE("rank-sum test: separation, identity and the pair-count oracle") {
    std::vector<double> low, high;
    for (int i = 1; i <= 20; ++i) {
        low.push_back(i);
        high.push_back(100 + i);
    }
    const RankSumResult sep = rank_sum_test(low, high);
    CHECK(sep.u_statistic == 0.0);
    CHECK(sep.p_two_sided < 1e-6);

    const RankSumResult same = rank_sum_test(low, low);
    CHECK(same.p_two_sided > 0.9);

    CHECK_THROWS_AS(rank_sum_test({1.0, 2.0}, low), std::invalid_argument);

    Rng rng(304);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> a, b;
        const std::size_t n = 3 + rng.below(30), m = 3 + rng.below(30);
        // integer-valued samples force plenty of midrank ties
        for (std::size_t i = 0; i < n; ++i) a.push_back(static_cast<double>(rng.below(12)));
        for (std::size_t i = 0; i < m; ++i) b.push_back(static_cast<double>(rng.below(12)));
        const RankSumResult r = rank_sum_test(a, b);
        CHECK(r.u_statistic == oracles::pair_count_u(a, b));
        // U_a + U_b = n*m
        const RankSumResult rb = rank_sum_test(b, a);
        CHECK(r.u_statistic + rb.u_statistic == doctest::Approx(n * m).epsilon(1e-12));
        CHECK(r.p_two_sided == doctest::Approx(rb.p_two_sided).epsilon(1e-12));
    }

    // one-sided direction: "a tends smaller" is tiny for separated samples
    CHECK(rank_sum_p_less(low, high) < 1e-6);
    CHECK(rank_sum_p_less(high, low) > 0.999);
}
