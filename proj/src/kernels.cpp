#include "mot/kernels.hpp"

#include <atomic>

namespace mot::par {

namespace {
std::atomic<KernelMode> g_mode{
#ifdef _OPENMP
    KernelMode::OpenMP
#else
    KernelMode::Serial
#endif
};
}  // namespace

KernelMode kernel_mode() { return g_mode.load(std::memory_order_relaxed); }

void set_kernel_mode(KernelMode m) { g_mode.store(m, std::memory_order_relaxed); }

}  // namespace mot::par
