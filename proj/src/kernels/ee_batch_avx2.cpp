// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.
#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "eeopt/kernels/ee_batch.hpp"

namespace eeopt::kernels {
namespace {

// log(u) for finite u >= 1. Range reduction u = 2^e * r with r in
// [sqrt(1/2), sqrt(2)), then log(r) = 2*atanh(s), s = (r-1)/(r+1), |s| <= 0.1716.
inline __m256d log_ge1_pd(__m256d u) {
    const __m256i bits = _mm256_castpd_si256(u);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    const __m256d two52 = _mm256_set1_pd(0x1p52);

    // Biased exponent as a double via the 2^52 magic constant.
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(two52))),
        _mm256_set1_pd(0x1p52 + 1023.0));
    __m256d r = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d big = _mm256_cmp_pd(r, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    r = _mm256_blendv_pd(r, _mm256_mul_pd(r, _mm256_set1_pd(0.5)), big);
    e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(r, one), _mm256_add_pd(r, one));
    const __m256d s2 = _mm256_mul_pd(s, s);

    // sum_{k=0}^{11} s^{2k} / (2k+1), Horner from the top.
    __m256d poly = _mm256_set1_pd(1.0 / 23.0);
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 21.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 19.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 17.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 15.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 13.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 11.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 9.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 7.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 5.0));
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 3.0));
    // 2s * (1 + s2*tail) kept as 2s + 2s*s2*tail so the leading term is exact.
    const __m256d two_s = _mm256_add_pd(s, s);
    const __m256d log_r = _mm256_fmadd_pd(_mm256_mul_pd(two_s, s2), poly, two_s);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_r));
}

// Goldberg's correction: log1p(x) = log(1+x) * x / ((1+x) - 1), exact for u == 1.
inline __m256d log1p_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d u = _mm256_add_pd(one, x);
    const __m256d um1 = _mm256_sub_pd(u, one);
    const __m256d same = _mm256_cmp_pd(um1, _mm256_setzero_pd(), _CMP_EQ_OQ);
    // Avoid 0/0 in the discarded lanes.
    const __m256d safe_den = _mm256_blendv_pd(um1, one, same);
    const __m256d corrected = _mm256_mul_pd(log_ge1_pd(u), _mm256_div_pd(x, safe_den));
    return _mm256_blendv_pd(corrected, x, same);
}

}  // namespace

void ee_batch_avx2(std::span<const double> p, std::span<const double> b,
                   std::span<const double> m, const EeLaneConstants& k, std::span<double> out) {
    const std::size_t n = out.size();
    const __m256d inv_kappa = _mm256_set1_pd(k.inv_kappa);
    const __m256d mu = _mm256_set1_pd(k.mu);
    const __m256d d0 = _mm256_set1_pd(k.d0);
    const __m256d nu = _mm256_set1_pd(k.nu);
    const __m256d eta = _mm256_set1_pd(k.eta);
    const __m256d gain = _mm256_set1_pd(k.gain_over_noise);
    const __m256d log2e = _mm256_set1_pd(model::kLog2E);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d pv = _mm256_loadu_pd(p.data() + i);
        const __m256d bv = _mm256_loadu_pd(b.data() + i);
        const __m256d mv = _mm256_loadu_pd(m.data() + i);

        // Same operation order as ee_lane(); no contraction on the model terms.
        const __m256d snr = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(mv, pv), gain), bv);
        const __m256d cap = _mm256_mul_pd(_mm256_mul_pd(bv, log1p_pd(snr)), log2e);
        __m256d pc = _mm256_add_pd(_mm256_mul_pd(pv, inv_kappa), mu);
        pc = _mm256_add_pd(pc, _mm256_mul_pd(_mm256_add_pd(d0, _mm256_mul_pd(nu, bv)), mv));
        pc = _mm256_add_pd(pc, _mm256_mul_pd(eta, cap));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(cap, pc));
    }
    if (i < n) {
        // Out-of-line scalar tail keeps inline helpers from being emitted with VEX encodings here.
        ee_batch_scalar(p.subspan(i), b.subspan(i), m.subspan(i), k, out.subspan(i));
    }
}

void log1p_batch_avx2(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out.data() + i, log1p_pd(_mm256_loadu_pd(x.data() + i)));
    }
    for (; i < n; ++i) {
        out[i] = std::log1p(x[i]);
    }
}

}  // namespace eeopt::kernels
