#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

namespace qfun {

/// Wall-clock and memory budget shared by the engine and the SAT oracle.
/// check() throws ResourceLimit once exhausted.
class Budget {
public:
    using Clock = std::chrono::steady_clock;

    Budget() = default;
    static Budget unlimited() { return {}; }
    static Budget seconds(double s, std::size_t memory_limit_bytes = 0);

    void check() const;
    bool limited() const { return deadline_.has_value() || memory_limit_ != 0; }

private:
    std::optional<Clock::time_point> deadline_;
    std::size_t memory_limit_ = 0;
};

/// Resident set size of this process in bytes, 0 if unavailable.
std::size_t resident_memory_bytes();

} // namespace qfun
