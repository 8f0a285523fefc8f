#include <immintrin.h>

#include "pag/kernels.hpp"

// AVX2 variants. Arithmetic per element mirrors the scalar kernels exactly
// (same multiplies, same adds, no FMA), so outputs are bit-identical.

namespace pag::kernels {

namespace {

void bernoulli_hits_avx2(const double* u, const uint32_t* deg, const double* ftab,
                         double inv, uint8_t* out, size_t count) {
    const __m256d vinv = _mm256_set1_pd(inv);
    size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(deg + j));
        const __m256d fv = _mm256_i32gather_pd(ftab, idx, 8);
        const __m256d thr = _mm256_mul_pd(fv, vinv);
        const __m256d uu = _mm256_loadu_pd(u + j);
        const __m256d lt = _mm256_cmp_pd(uu, thr, _CMP_LT_OQ);
        const int mask = _mm256_movemask_pd(lt);
        out[j] = mask & 1 ? 1 : 0;
        out[j + 1] = mask & 2 ? 1 : 0;
        out[j + 2] = mask & 4 ? 1 : 0;
        out[j + 3] = mask & 8 ? 1 : 0;
    }
    for (; j < count; ++j) {
        out[j] = u[j] < ftab[deg[j]] * inv ? 1 : 0;
    }
}

void dp_row_update_avx2(const double* prev, double* next, const double* fvals,
                        double inv, size_t count) {
    if (count == 0) return;
    next[0] = prev[0] * (1.0 - fvals[0] * inv);
    const __m256d vinv = _mm256_set1_pd(inv);
    const __m256d one = _mm256_set1_pd(1.0);
    size_t m = 1;
    for (; m + 4 <= count; m += 4) {
        const __m256d pm = _mm256_loadu_pd(prev + m);
        const __m256d fm = _mm256_loadu_pd(fvals + m);
        const __m256d pl = _mm256_loadu_pd(prev + m - 1);
        const __m256d fl = _mm256_loadu_pd(fvals + m - 1);
        const __m256d stay = _mm256_mul_pd(pm, _mm256_sub_pd(one, _mm256_mul_pd(fm, vinv)));
        const __m256d cross = _mm256_mul_pd(pl, _mm256_mul_pd(fl, vinv));
        _mm256_storeu_pd(next + m, _mm256_add_pd(stay, cross));
    }
    for (; m < count; ++m) {
        const double stay = prev[m] * (1.0 - fvals[m] * inv);
        const double cross = prev[m - 1] * (fvals[m - 1] * inv);
        next[m] = stay + cross;
    }
}

double abs_diff_sum_avx2(const double* a, const double* b, size_t count) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double tail = 0.0;
    for (; j < count; ++j) {
        const double d = a[j] - b[j];
        tail += d < 0 ? -d : d;
    }
    return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]) + tail;
}

}  // namespace

const Kernels* avx2_impl() {
    static const Kernels k{bernoulli_hits_avx2, dp_row_update_avx2, abs_diff_sum_avx2, "avx2"};
    return &k;
}

}  // namespace pag::kernels
