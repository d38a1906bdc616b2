#pragma once

#include <cstdint>
#include <string>

namespace gsalg {

/// Memory budget for dense linear algebra, in bytes. Default 512 MiB; the
/// environment variable GSALG_MEMORY_GUARD_MB overrides it.
std::uint64_t memory_guard_bytes();

/// Throws CapExceeded when `bytes` exceeds the guard; `what` names the computation.
void check_memory(std::uint64_t bytes, const std::string& what);

}  // namespace gsalg
