#include "ncalab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ncalab {

std::vector<LossPoint> extended_loss_series(const Genome& genome, int grid_size, int evolved_steps,
                                            int extra_steps, const TargetShape& target,
                                            const StepOptions& opts) {
    if (extra_steps < 0) throw std::invalid_argument("extended_loss_series: extra_steps < 0");
    if (target.size != grid_size)
        throw std::invalid_argument("extended_loss_series: target/grid dimension mismatch");
    const int total = evolved_steps + extra_steps;
    const RolloutTrace trace = rollout(genome, grid_size, total, /*record_grids=*/true, opts);
    const double cells = static_cast<double>(target.mask.size());
    std::vector<LossPoint> series;
    series.reserve(static_cast<std::size_t>(total));
    for (int n = 1; n <= total; ++n) {
        const GridState& g = trace.grids[static_cast<std::size_t>(n)];
        int mismatches = 0;
        for (std::size_t i = 0; i < target.mask.size(); ++i)
            mismatches += g.alive[i] != target.mask[i];
        series.push_back({n, mismatches / cells});
    }
    return series;
}

double stability_slope(const std::vector<LossPoint>& series, int from_step, int to_step) {
    std::vector<const LossPoint*> window;
    for (const auto& p : series)
        if (p.step >= from_step && p.step <= to_step) window.push_back(&p);
    if (window.size() < 2)
        throw std::invalid_argument("stability_slope: window [" + std::to_string(from_step) + "," +
                                    std::to_string(to_step) + "] covers fewer than two points");
    const double n = static_cast<double>(window.size());
    double sx = 0, sy = 0;
    for (const auto* p : window) {
        sx += p->step;
        sy += p->loss;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto* p : window) {
        const double dx = p->step - mx;
        sxx += dx * dx;
        sxy += dx * (p->loss - my);
    }
    return sxy / sxx;
}

double instability(const Genome& genome, int grid_size, int steps, const StepOptions& opts) {
    if (steps < 1) throw std::invalid_argument("instability: steps must be >= 1");
    const RolloutTrace trace = rollout(genome, grid_size, 2 * steps, /*record_grids=*/true, opts);
    return normalized_mask_distance(trace.grids[static_cast<std::size_t>(2 * steps)],
                                    trace.grids[static_cast<std::size_t>(steps)]);
}

Transiency transiency(const RolloutTrace& trace) {
    if (!trace.has_grids())
        throw std::invalid_argument("transiency: trace was recorded without grids");
    Transiency out;
    const std::size_t cells = trace.grids[0].alive.size();
    std::uint64_t ever_alive = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        int first_alive = -1;
        for (std::size_t n = 0; n < trace.grids.size(); ++n) {
            if (trace.grids[n].alive[i]) {
                first_alive = static_cast<int>(n);
                break;
            }
        }
        if (first_alive < 0) continue;
        ++ever_alive;
        for (std::size_t n = static_cast<std::size_t>(first_alive) + 1; n < trace.grids.size(); ++n)
            out.total += trace.grids[n].alive[i] != trace.grids[n - 1].alive[i];
    }
    if (ever_alive == 0) {
        out.degenerate = true;
        return out;
    }
    out.mean_per_cell = static_cast<double>(out.total) / static_cast<double>(ever_alive);
    return out;
}

int connected_components(const GridState& grid, Connectivity connectivity) {
    const int m = grid.size;
    std::vector<std::uint8_t> seen(grid.alive.size(), 0);
    std::vector<std::size_t> stack;
    int components = 0;
    const int dr4[] = {-1, 1, 0, 0}, dc4[] = {0, 0, -1, 1};
    const int dr8[] = {-1, 1, 0, 0, -1, -1, 1, 1}, dc8[] = {0, 0, -1, 1, -1, 1, -1, 1};
    const int ndirs = connectivity == Connectivity::Four ? 4 : 8;
    const int* dr = connectivity == Connectivity::Four ? dr4 : dr8;
    const int* dc = connectivity == Connectivity::Four ? dc4 : dc8;

    for (std::size_t start = 0; start < grid.alive.size(); ++start) {
        if (!grid.alive[start] || seen[start]) continue;
        ++components;
        seen[start] = 1;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int r = static_cast<int>(i) / m;
            const int c = static_cast<int>(i) % m;
            for (int d = 0; d < ndirs; ++d) {
                const int nr = r + dr[d], nc = c + dc[d];
                if (!grid.in_bounds(nr, nc)) continue;
                const std::size_t ni = grid.index(nr, nc);
                if (grid.alive[ni] && !seen[ni]) {
                    seen[ni] = 1;
                    stack.push_back(ni);
                }
            }
        }
    }
    return components;
}

double boundary_proportion(const GridState& grid) {
    const int m = grid.size;
    int alive = 0, on_border = 0;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (!grid.alive[grid.index(r, c)]) continue;
            ++alive;
            if (r == 0 || r == m - 1 || c == 0 || c == m - 1) ++on_border;
        }
    }
    return alive == 0 ? 0.0 : static_cast<double>(on_border) / alive;
}

double normalized_mask_distance(const GridState& a, const GridState& b) {
    if (a.size != b.size)
        throw std::invalid_argument("normalized_mask_distance: grid size mismatch");
    int diff = 0;
    for (std::size_t i = 0; i < a.alive.size(); ++i) diff += a.alive[i] != b.alive[i];
    return static_cast<double>(diff) / static_cast<double>(a.alive.size());
}

namespace {

struct RankSumInternals {
    double u_a = 0.0;
    double mu = 0.0;
    double sigma = 0.0;  // 0 when every observation is tied
};

RankSumInternals rank_sum_internals(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 3 || b.size() < 3)
        throw std::invalid_argument("rank_sum_test: each sample needs at least 3 observations");
    const std::size_t n = a.size(), m = b.size(), total = n + m;

    std::vector<std::pair<double, int>> pooled;  // (value, 0 for a / 1 for b)
    pooled.reserve(total);
    for (double v : a) pooled.emplace_back(v, 0);
    for (double v : b) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j < total && pooled[j].first == pooled[i].first) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t p = i; p < j; ++p)
            if (pooled[p].second == 0) rank_sum_a += midrank;
        if (t > 1.0) tie_term += t * t * t - t;
        i = j;
    }

    RankSumInternals out;
    const double dn = static_cast<double>(n), dm = static_cast<double>(m), dt = static_cast<double>(total);
    out.u_a = rank_sum_a - dn * (dn + 1.0) / 2.0;
    out.mu = dn * dm / 2.0;
    const double var = dn * dm / 12.0 * ((dt + 1.0) - tie_term / (dt * (dt - 1.0)));
    out.sigma = var > 0.0 ? std::sqrt(var) : 0.0;
    return out;
}

}  // namespace

RankSumResult rank_sum_test(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b) {
    const RankSumInternals s = rank_sum_internals(sample_a, sample_b);
    RankSumResult out;
    out.u_statistic = s.u_a;
    if (s.sigma == 0.0) {
        out.p_two_sided = 1.0;  // every observation tied
        return out;
    }
    const double shift = s.u_a > s.mu ? -0.5 : (s.u_a < s.mu ? 0.5 : 0.0);
    const double z = (s.u_a + shift - s.mu) / s.sigma;
    out.p_two_sided = std::erfc(std::abs(z) / std::sqrt(2.0));
    if (out.p_two_sided > 1.0) out.p_two_sided = 1.0;
    return out;
}

double rank_sum_p_less(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
    const RankSumInternals s = rank_sum_internals(sample_a, sample_b);
    if (s.sigma == 0.0) return 0.5;
    const double z = (s.u_a + 0.5 - s.mu) / s.sigma;  // continuity toward the alternative
    return 0.5 * std::erfc(-z / std::sqrt(2.0));      // Phi(z)
}

}  // namespace ncalab
