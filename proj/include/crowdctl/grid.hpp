#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crowdctl/model.hpp"

namespace crowdctl {

/// Route bias of one generated source: it heads for each reachable waypoint
/// in order, then for the goal.
struct SourceProfile {
    std::vector<std::size_t> waypoints;
    double noise = 0.15;
};

/// Grid navigation problem. Nodes are row-major, row 0 at the south edge;
/// from each node the admissible moves are stay, east (+1) and north (+cols),
/// with moves off the grid folding into stay.
struct GridSpec {
    std::size_t rows = 5;
    std::size_t cols = 5;
    std::size_t horizon = 8;
    std::size_t start = 0;
    std::size_t goal = 24;
    /// Off-route mass of the target kernels, in [0, 1).
    double noise = 0.15;
    std::vector<SourceProfile> source_profiles;
};

enum class RewardPreset { zero, penalty };

struct GridNode {
    std::size_t row = 0;
    std::size_t col = 0;
};

GridNode grid_node(const GridSpec& g, std::size_t index) noexcept;
std::size_t grid_index(const GridSpec& g, GridNode node) noexcept;

/// Node penalized by the `penalty` preset: (round(3(rows-1)/4), round(3(cols-1)/4)),
/// node 18 on a 5x5 grid.
std::size_t penalized_node(const GridSpec& g) noexcept;
/// Node favored by the `penalty` preset: (round((rows-1)/2), round((cols-1)/4)),
/// node 11 on a 5x5 grid.
std::size_t favored_node(const GridSpec& g) noexcept;

/// Next node on the staircase towards `to` (east while the remaining column
/// gap is at least the row gap, otherwise north); `from` itself once there.
std::size_t staircase_step(const GridSpec& g, std::size_t from, std::size_t to) noexcept;

/// Default source profiles: the target route itself, a detour through the
/// favored node that continues north before turning east, the west-then-north and east-then-north boundary routes, and
/// seeded random waypoints beyond those.
std::vector<SourceProfile> default_source_profiles(const GridSpec& g, std::size_t count, std::uint64_t seed);

/// Builds the grid scenario. Empty `g.source_profiles` means
/// default_source_profiles(g, 3, seed). The agent reward is zero, or for `penalty`
/// -rho at the penalized node and +rho at the favored node at every stage.
/// Throws InfeasibleRouteError when the goal is not reachable within the horizon
/// and std::invalid_argument on malformed specs.
Scenario generate_grid_scenario(const GridSpec& g, std::uint64_t seed = 0,
                                RewardPreset preset = RewardPreset::zero, double rho = 5.0);

} // namespace crowdctl
