#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace arclab::kernels {

/// Batch Horner evaluation: out[i] = sum_k coeffs[k] * xs[i]^k.
/// The AVX2 variant uses mul+add (no FMA) so results are bit-identical to
/// the scalar reference; equivalence tests assert exact equality.
using PolyEvalBatchFn = void (*)(const double* coeffs, size_t ncoeff, const double* xs, double* out, size_t n);

void poly_eval_batch_scalar(const double* coeffs, size_t ncoeff, const double* xs, double* out, size_t n);
void poly_eval_batch_avx2(const double* coeffs, size_t ncoeff, const double* xs, double* out, size_t n);

/// out[i] = |xs[i] - b|, batch helper for comparability grids.
void abs_shift_batch_scalar(const double* xs, double b, double* out, size_t n);
void abs_shift_batch_avx2(const double* xs, double b, double* out, size_t n);

bool cpu_has_avx2();

/// Active kernel set, selected once at startup (env ARCLAB_KERNEL=scalar|avx2
/// overrides autodetection).
struct Dispatch {
    PolyEvalBatchFn poly_eval_batch;
    void (*abs_shift_batch)(const double*, double, double*, size_t);
    const char* name;
};
const Dispatch& active();
/// Force a kernel set by name ("scalar" or "avx2"); returns false if
/// unavailable on this CPU.
bool select(const std::string& name);

inline void poly_eval_batch(const double* coeffs, size_t ncoeff, const double* xs, double* out, size_t n) {
    active().poly_eval_batch(coeffs, ncoeff, xs, out, n);
}

}  // namespace arclab::kernels
