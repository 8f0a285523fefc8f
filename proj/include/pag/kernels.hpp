#pragma once

// Hot-loop kernels with scalar reference implementations and AVX2 variants
// selected at runtime. Both variants are bit-identical by construction: no
// FMA contraction (see -ffp-contract=off in the build), identical operation
// order per element, and reductions that stripe over four accumulators the
// same way a 4-lane vector sum does.

#include <cstddef>
#include <cstdint>

namespace pag::kernels {

// out[j] = 1 iff u[j] < ftab[deg[j]] * inv. One Bernoulli row of the naive
// generator: u holds pre-drawn uniforms, deg the frozen indegree snapshot.
using BernoulliHitsFn = void (*)(const double* u, const uint32_t* deg, const double* ftab,
                                 double inv, uint8_t* out, size_t count);

// next[m] = prev[m] * (1 - fvals[m]*inv) + prev[m-1] * fvals[m-1]*inv over
// m = 0..count-1 (prev[-1] treated as 0). One time step of the indegree DP.
using DpRowUpdateFn = void (*)(const double* prev, double* next, const double* fvals,
                               double inv, size_t count);

// Sum of |a[j] - b[j]|, accumulated in four striped partial sums that are
// combined as (s0+s2) + (s1+s3).
using AbsDiffSumFn = double (*)(const double* a, const double* b, size_t count);

struct Kernels {
    BernoulliHitsFn bernoulli_hits;
    DpRowUpdateFn dp_row_update;
    AbsDiffSumFn abs_diff_sum;
    const char* name;
};

const Kernels& scalar();
// Null when the build or the running CPU lacks AVX2.
const Kernels* avx2();
// Scalar unless the CPU supports AVX2 at runtime.
const Kernels& active();

}  // namespace pag::kernels
