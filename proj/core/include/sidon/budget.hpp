#pragma once

#include <cstdint>

namespace sidon {

/// Enumeration caps. A certificate is produced completely or not at all; going
/// over a cap raises BudgetExceeded.
struct Budgets {
    std::uint64_t points = std::uint64_t{1} << 16;  // projective points per space
    std::uint64_t pairs = std::uint64_t{1} << 22;   // product insertions
    std::uint64_t orbit = std::uint64_t{1} << 24;   // alpha representatives per sweep
    unsigned workers = 0;                           // 0 = hardware concurrency
};

}  // namespace sidon
