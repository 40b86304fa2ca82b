#include "qfun/budget.hpp"

#include "qfun/error.hpp"

#include <fstream>
#include <unistd.h>

namespace qfun {

Budget Budget::seconds(double s, std::size_t memory_limit_bytes) {
    Budget b;
    if (s > 0) {
        b.deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s));
    }
    b.memory_limit_ = memory_limit_bytes;
    return b;
}

void Budget::check() const {
    if (deadline_ && Clock::now() >= *deadline_) throw ResourceLimit("time limit exceeded");
    if (memory_limit_ != 0 && resident_memory_bytes() > memory_limit_) throw ResourceLimit("memory limit exceeded");
}

std::size_t resident_memory_bytes() {
    std::ifstream statm("/proc/self/statm");
    std::size_t total = 0, resident = 0;
    if (!(statm >> total >> resident)) return 0;
    return resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

} // namespace qfun
