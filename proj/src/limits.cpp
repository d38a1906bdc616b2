#include "gsalg/limits.hpp"

#include <cstdlib>

#include "gsalg/error.hpp"

namespace gsalg {

std::uint64_t memory_guard_bytes() {
    constexpr std::uint64_t kDefaultMb = 512;
    std::uint64_t mb = kDefaultMb;
    if (const char* env = std::getenv("GSALG_MEMORY_GUARD_MB")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) mb = v;
    }
    return mb << 20;
}

void check_memory(std::uint64_t bytes, const std::string& what) {
    std::uint64_t guard = memory_guard_bytes();
    if (bytes > guard)
        throw CapExceeded(what + " needs about " + std::to_string(bytes >> 20) + " MiB, above the " + std::to_string(guard >> 20) +
                          " MiB guard (set GSALG_MEMORY_GUARD_MB to raise it)");
}

}  // namespace gsalg
