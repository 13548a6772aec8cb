#include "crowdctl/grid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "crowdctl/errors.hpp"

namespace crowdctl {

GridNode grid_node(const GridSpec& g, std::size_t index) noexcept { return {index / g.cols, index % g.cols}; }

std::size_t grid_index(const GridSpec& g, GridNode node) noexcept { return node.row * g.cols + node.col; }

namespace {

std::size_t scaled(std::size_t extent, double fraction) {
    return static_cast<std::size_t>(std::lround(fraction * static_cast<double>(extent - 1)));
}

bool reachable(GridNode from, GridNode to) { return to.row >= from.row && to.col >= from.col; }

// Distinct successors of a node under {stay, east, north}, in that order.
std::vector<std::size_t> successors(const GridSpec& g, std::size_t x) {
    const auto node = grid_node(g, x);
    std::vector<std::size_t> out{x};
    if (node.col + 1 < g.cols) out.push_back(x + 1);
    if (node.row + 1 < g.rows) out.push_back(x + g.cols);
    return out;
}

void fill_row(const GridSpec& g, std::size_t x, std::size_t preferred, double noise, std::span<double> row) {
    const auto next = successors(g, x);
    if (next.size() == 1) {
        row[x] = 1.0;
        return;
    }
    const double spread = noise / static_cast<double>(next.size() - 1);
    for (std::size_t y : next) row[y] = (y == preferred) ? 1.0 - noise : spread;
}

std::size_t route_step(const GridSpec& g, std::size_t x, const std::vector<std::size_t>& waypoints) {
    const auto here = grid_node(g, x);
    for (std::size_t w : waypoints)
        if (w != x && reachable(here, grid_node(g, w))) return staircase_step(g, x, w);
    return staircase_step(g, x, g.goal);
}

TransitionKernel route_kernel(const GridSpec& g, const std::vector<std::size_t>& waypoints, double noise) {
    const std::size_t n = g.rows * g.cols;
    TransitionKernel kernel(n, n, 0.0);
    for (std::size_t x = 0; x < n; ++x) fill_row(g, x, route_step(g, x, waypoints), noise, kernel.row(x));
    return kernel;
}

// Keeps a source inside the target's support: mass outside it is dropped and
// the row renormalized, or the target row is used when nothing is left.
void restrict_to_support(const TransitionKernel& target, TransitionKernel& source) {
    for (std::size_t x = 0; x < target.rows(); ++x) {
        auto row = source.row(x);
        double kept = 0.0;
        bool dropped = false;
        for (std::size_t y = 0; y < row.size(); ++y) {
            if (target(x, y) == 0.0 && row[y] != 0.0) {
                row[y] = 0.0;
                dropped = true;
            }
            kept += row[y];
        }
        if (kept == 0.0) {
            std::copy(target.row(x).begin(), target.row(x).end(), row.begin());
        } else if (dropped) {
            for (double& v : row) v /= kept;
        }
    }
}

void check_spec(const GridSpec& g) {
    if (g.rows == 0 || g.cols == 0) throw std::invalid_argument("grid: rows and cols must be positive");
    const std::size_t n = g.rows * g.cols;
    if (g.start >= n || g.goal >= n) throw std::invalid_argument("grid: start/goal outside the grid");
    if (g.horizon == 0) throw std::invalid_argument("grid: horizon must be positive");
    if (!(g.noise >= 0.0 && g.noise < 1.0)) throw std::invalid_argument("grid: noise must lie in [0, 1)");
    for (const auto& p : g.source_profiles) {
        if (!(p.noise >= 0.0 && p.noise < 1.0)) throw std::invalid_argument("grid: source noise must lie in [0, 1)");
        for (std::size_t w : p.waypoints)
            if (w >= n) throw std::invalid_argument("grid: waypoint outside the grid");
    }
    const auto start = grid_node(g, g.start);
    const auto goal = grid_node(g, g.goal);
    if (!reachable(start, goal))
        throw InfeasibleRouteError("grid: goal is not reachable from start with east/north moves");
    const std::size_t distance = (goal.row - start.row) + (goal.col - start.col);
    if (g.horizon < distance) {
        throw InfeasibleRouteError("grid: horizon " + std::to_string(g.horizon) + " is shorter than the " +
                                   std::to_string(distance) + "-move route");
    }
}

} // namespace

std::size_t penalized_node(const GridSpec& g) noexcept {
    return grid_index(g, {scaled(g.rows, 0.75), scaled(g.cols, 0.75)});
}

std::size_t favored_node(const GridSpec& g) noexcept {
    return grid_index(g, {scaled(g.rows, 0.5), scaled(g.cols, 0.25)});
}

std::size_t staircase_step(const GridSpec& g, std::size_t from, std::size_t to) noexcept {
    const auto a = grid_node(g, from);
    const auto b = grid_node(g, to);
    const std::size_t east = b.col > a.col ? b.col - a.col : 0;
    const std::size_t north = b.row > a.row ? b.row - a.row : 0;
    if (east == 0 && north == 0) return from;
    return east >= north ? from + 1 : from + g.cols;
}

std::vector<SourceProfile> default_source_profiles(const GridSpec& g, std::size_t count, std::uint64_t seed) {
    const auto start = grid_node(g, g.start);
    const auto goal = grid_node(g, g.goal);
    std::vector<SourceProfile> profiles;
    const std::vector<std::vector<std::size_t>> fixed{
        {},
        {favored_node(g), grid_index(g, {goal.row, grid_node(g, favored_node(g)).col})},
        {grid_index(g, {goal.row, start.col})},
        {grid_index(g, {start.row, goal.col})},
    };
    for (std::size_t i = 0; i < count && i < fixed.size(); ++i) profiles.push_back({fixed[i], g.noise});

    std::mt19937_64 engine(seed);
    const std::size_t row_span = goal.row >= start.row ? goal.row - start.row + 1 : 1;
    const std::size_t col_span = goal.col >= start.col ? goal.col - start.col + 1 : 1;
    while (profiles.size() < count) {
        const std::size_t r = start.row + engine() % row_span;
        const std::size_t c = start.col + engine() % col_span;
        profiles.push_back({{grid_index(g, {r, c})}, g.noise});
    }
    return profiles;
}

Scenario generate_grid_scenario(const GridSpec& g, std::uint64_t seed, RewardPreset preset, double rho) {
    check_spec(g);
    const std::size_t n = g.rows * g.cols;
    const auto profiles = g.source_profiles.empty() ? default_source_profiles(g, 3, seed) : g.source_profiles;

    Scenario s;
    s.space.size = n;
    s.horizon = g.horizon;
    s.initial.assign(n, 0.0);
    s.initial[g.start] = 1.0;

    const auto target = route_kernel(g, {}, g.noise);
    s.target.assign(g.horizon, target);

    s.reward = RewardSchedule(g.horizon, n, 0.0);
    if (preset == RewardPreset::penalty) {
        for (std::size_t k = 0; k < g.horizon; ++k) {
            s.reward(k, penalized_node(g)) = -rho;
            s.reward(k, favored_node(g)) = rho;
        }
    }

    for (const auto& profile : profiles) {
        auto kernel = route_kernel(g, profile.waypoints, profile.noise);
        restrict_to_support(target, kernel);
        s.sources.push_back({BehaviorSequence(g.horizon, kernel), std::nullopt, std::nullopt});
    }
    return s;
}

} // namespace crowdctl
