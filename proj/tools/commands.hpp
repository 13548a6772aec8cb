#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "crowdctl/grid.hpp"

namespace crowdctl::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kIoFailure = 1, kInvalidInput = 2 };

struct ScenarioCommand {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> out;
};

enum class SimulatedBehavior { selected, oracle };

struct SimulateCommand {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> out;
    std::size_t rollouts = 1000;
    std::uint64_t seed = 0;
    SimulatedBehavior behavior = SimulatedBehavior::selected;
};

struct GridgenCommand {
    GridSpec grid;
    std::size_t sources = 3;
    RewardPreset preset = RewardPreset::zero;
    double rho = 5.0;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out;
};

// Each command writes its primary artifact to `out` (or the --out file) and
// diagnostics to `err`, and returns an ExitCode.
int run_solve(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err);
int run_oracle(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err);
int run_regret(const ScenarioCommand& cmd, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateCommand& cmd, std::ostream& out, std::ostream& err);
int run_gridgen(const GridgenCommand& cmd, std::ostream& out, std::ostream& err);

/// Full command line, as `main` would see it.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace crowdctl::cli
