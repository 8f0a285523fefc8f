#include "pag/kernels.hpp"

namespace pag::kernels {

namespace {

void bernoulli_hits_scalar(const double* u, const uint32_t* deg, const double* ftab,
                           double inv, uint8_t* out, size_t count) {
    for (size_t j = 0; j < count; ++j) {
        out[j] = u[j] < ftab[deg[j]] * inv ? 1 : 0;
    }
}

void dp_row_update_scalar(const double* prev, double* next, const double* fvals,
                          double inv, size_t count) {
    double carry = 0.0;  // prev[m-1] * fvals[m-1] * inv from the previous lane
    for (size_t m = 0; m < count; ++m) {
        const double stay = prev[m] * (1.0 - fvals[m] * inv);
        next[m] = stay + carry;
        carry = prev[m] * (fvals[m] * inv);
    }
}

double abs_diff_sum_scalar(const double* a, const double* b, size_t count) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        double d0 = a[j] - b[j];
        double d1 = a[j + 1] - b[j + 1];
        double d2 = a[j + 2] - b[j + 2];
        double d3 = a[j + 3] - b[j + 3];
        s0 += d0 < 0 ? -d0 : d0;
        s1 += d1 < 0 ? -d1 : d1;
        s2 += d2 < 0 ? -d2 : d2;
        s3 += d3 < 0 ? -d3 : d3;
    }
    double tail = 0.0;
    for (; j < count; ++j) {
        const double d = a[j] - b[j];
        tail += d < 0 ? -d : d;
    }
    return (s0 + s2) + (s1 + s3) + tail;
}

}  // namespace

const Kernels& scalar() {
    static const Kernels k{bernoulli_hits_scalar, dp_row_update_scalar, abs_diff_sum_scalar, "scalar"};
    return k;
}

}  // namespace pag::kernels
