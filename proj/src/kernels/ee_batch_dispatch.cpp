#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "eeopt/kernels/ee_batch.hpp"

namespace eeopt::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool avx2_available() {
#if defined(EEOPT_HAVE_AVX2_KERNEL) && (defined(__x86_64__) || defined(__i386__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* forced = std::getenv("EEOPT_ISA");
        if (forced != nullptr && std::string_view(forced) == "scalar") {
            return Isa::scalar;
        }
        return avx2_available() ? Isa::avx2 : Isa::scalar;
    }();
    return isa;
}

namespace {

void check_sizes(std::size_t n, std::size_t a, std::size_t b, std::size_t c) {
    if (a != n || b != n || c != n) {
        throw std::invalid_argument("ee_batch: span length mismatch");
    }
}

}  // namespace

void ee_batch_scalar(std::span<const double> p, std::span<const double> b,
                     std::span<const double> m, const EeLaneConstants& k, std::span<double> out) {
    check_sizes(out.size(), p.size(), b.size(), m.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ee_lane(p[i], b[i], m[i], k);
    }
}

#if !defined(EEOPT_HAVE_AVX2_KERNEL)
void ee_batch_avx2(std::span<const double> p, std::span<const double> b,
                   std::span<const double> m, const EeLaneConstants& k, std::span<double> out) {
    ee_batch_scalar(p, b, m, k, out);
}
#endif

void ee_batch(Isa isa, std::span<const double> p, std::span<const double> b,
              std::span<const double> m, const EeLaneConstants& k, std::span<double> out) {
    check_sizes(out.size(), p.size(), b.size(), m.size());
    if (isa == Isa::avx2 && avx2_available()) {
        ee_batch_avx2(p, b, m, k, out);
    } else {
        ee_batch_scalar(p, b, m, k, out);
    }
}

#if defined(EEOPT_HAVE_AVX2_KERNEL)
void log1p_batch_avx2(std::span<const double> x, std::span<double> out);
#endif

void log1p_batch(Isa isa, std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) {
        throw std::invalid_argument("log1p_batch: span length mismatch");
    }
#if defined(EEOPT_HAVE_AVX2_KERNEL)
    if (isa == Isa::avx2 && avx2_available()) {
        log1p_batch_avx2(x, out);
        return;
    }
#endif
    (void)isa;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::log1p(x[i]);
    }
}

}  // namespace eeopt::kernels
