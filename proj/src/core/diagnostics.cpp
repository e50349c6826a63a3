#include "olasso/diagnostics.hpp"

#include "olasso/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>

namespace olasso::diagnostics {
namespace {

std::atomic<std::uint64_t> g_checked{0};
std::atomic<std::uint64_t> g_violations{0};
std::atomic<bool> g_strict{false};
std::mutex g_mutex;
std::string g_last;

}  // namespace

bool record_step(const char* where, double before, double after, Direction dir) {
    g_checked.fetch_add(1, std::memory_order_relaxed);
    const double slack = kDescentSlack * std::max(1.0, std::abs(before));
    const double worsening = dir == Direction::kMinimize ? after - before : before - after;
    if (worsening <= slack) return true;

    g_violations.fetch_add(1, std::memory_order_relaxed);
    std::ostringstream msg;
    msg.precision(17);
    msg << where << ": objective moved from " << before << " to " << after;
    {
        std::lock_guard lock(g_mutex);
        g_last = msg.str();
    }
    if (g_strict.load()) throw Error(ErrorCode::kInternal, "descent violated in " + msg.str());
    return false;
}

std::uint64_t steps_checked() { return g_checked.load(); }
std::uint64_t violations() { return g_violations.load(); }

std::string last_violation() {
    std::lock_guard lock(g_mutex);
    return g_last;
}

void reset() {
    g_checked = 0;
    g_violations = 0;
    std::lock_guard lock(g_mutex);
    g_last.clear();
}

void set_strict(bool strict) { g_strict = strict; }
bool strict() { return g_strict.load(); }

}  // namespace olasso::diagnostics
