#include "ivq/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ivq::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const KernelTable& active_table() {
    static const KernelTable* selected = [] {
        const char* forced = std::getenv("IVQ_KERNELS");
        if (forced != nullptr) {
            std::string want(forced);
            if (want == "scalar") return &scalar_table();
            if (want == "avx2") {
                const KernelTable* avx2 = avx2_table();
                if (avx2 == nullptr || !cpu_has_avx2()) {
                    throw std::runtime_error("IVQ_KERNELS=avx2 but AVX2 is unavailable");
                }
                return avx2;
            }
            if (want != "auto") {
                throw std::runtime_error("IVQ_KERNELS must be scalar, avx2 or auto");
            }
        }
        const KernelTable* avx2 = avx2_table();
        return (avx2 != nullptr && cpu_has_avx2()) ? avx2 : &scalar_table();
    }();
    return *selected;
}

} // namespace ivq::kernels
