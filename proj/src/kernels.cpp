#include "arclab/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstdlib>

namespace arclab::kernels {

void poly_eval_batch_scalar(const double* coeffs, size_t ncoeff, const double* xs, double* out, size_t n) {
    if (ncoeff == 0) {
        for (size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    for (size_t i = 0; i < n; ++i) {
        double x = xs[i];
        double acc = coeffs[ncoeff - 1];
        for (size_t k = ncoeff - 1; k-- > 0;) acc = acc * x + coeffs[k];
        out[i] = acc;
    }
}

void abs_shift_batch_scalar(const double* xs, double b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::abs(xs[i] - b);
}

__attribute__((target("avx2"))) void poly_eval_batch_avx2(const double* coeffs, size_t ncoeff, const double* xs,
                                                          double* out, size_t n) {
    if (ncoeff == 0) {
        for (size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d acc = _mm256_set1_pd(coeffs[ncoeff - 1]);
        for (size_t k = ncoeff - 1; k-- > 0;) {
            acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coeffs[k]));
        }
        _mm256_storeu_pd(out + i, acc);
    }
    if (i < n) poly_eval_batch_scalar(coeffs, ncoeff, xs + i, out + i, n - i);
}

__attribute__((target("avx2"))) void abs_shift_batch_avx2(const double* xs, double b, double* out, size_t n) {
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vb);
        _mm256_storeu_pd(out + i, _mm256_and_pd(v, mask));
    }
    for (; i < n; ++i) out[i] = std::abs(xs[i] - b);
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

namespace {

Dispatch g_scalar{poly_eval_batch_scalar, abs_shift_batch_scalar, "scalar"};
Dispatch g_avx2{poly_eval_batch_avx2, abs_shift_batch_avx2, "avx2"};

Dispatch* pick_initial() {
    if (const char* env = std::getenv("ARCLAB_KERNEL")) {
        if (std::string(env) == "scalar") return &g_scalar;
        if (std::string(env) == "avx2" && cpu_has_avx2()) return &g_avx2;
    }
    return cpu_has_avx2() ? &g_avx2 : &g_scalar;
}

Dispatch* g_active = pick_initial();

}  // namespace

const Dispatch& active() { return *g_active; }

bool select(const std::string& name) {
    if (name == "scalar") {
        g_active = &g_scalar;
        return true;
    }
    if (name == "avx2") {
        if (!cpu_has_avx2()) return false;
        g_active = &g_avx2;
        return true;
    }
    return false;
}

}  // namespace arclab::kernels
