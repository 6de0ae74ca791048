#pragma once

#include <cstdint>

namespace midy {

// Process-wide tunables, set once by the CLI (flags beat MIDY_* environment
// variables beat these defaults) and read concurrently by workers.
namespace config {

inline constexpr std::uint64_t kDefaultOracleBound = 10'000;
inline constexpr std::uint64_t kDefaultFactorBudget = 10'000'000;

/// Largest modulus (and order) the exhaustive oracles will enumerate.
std::uint64_t oracle_bound();
void set_oracle_bound(std::uint64_t bound);

/// Total rho iterations allowed per factorize() call.
std::uint64_t factor_budget();
void set_factor_budget(std::uint64_t budget);

}  // namespace config
}  // namespace midy
