// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; the dispatcher only routes here after a cpuid
// check, so no other TU may inline these symbols.

#include "ccqt/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define CCQT_X86_64 1
#else
#define CCQT_X86_64 0
#endif

#if CCQT_X86_64
#include <immintrin.h>
#endif

namespace ccqt::kernels::detail {

#if CCQT_X86_64

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// sign masks to flip the odd / even double lane of each complex slot
const __m256d kFlipOdd = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
const __m256d kFlipEven = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);

} // namespace

cplx dot_conj_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc1 = _mm256_setzero_pd();  // lanes: xr*yr, xi*yi
    __m256d acc2 = _mm256_setzero_pd();  // lanes: xr*yi, xi*yr
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d ys = _mm256_permute_pd(yv, 0x5);
        acc1 = _mm256_fmadd_pd(xv, yv, acc1);
        acc2 = _mm256_fmadd_pd(xv, ys, acc2);
    }
    double re = hsum(acc1);
    double im = hsum(_mm256_xor_pd(acc2, kFlipOdd));
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d ys = _mm256_permute_pd(yv, 0x5);
        acc1 = _mm256_fmadd_pd(xv, yv, acc1);
        acc2 = _mm256_fmadd_pd(xv, ys, acc2);
    }
    double re = hsum(_mm256_xor_pd(acc1, kFlipOdd));
    double im = hsum(acc2);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d t = _mm256_xor_pd(_mm256_mul_pd(ai, xs), kFlipEven);
        yv = _mm256_fmadd_pd(ar, xv, _mm256_add_pd(yv, t));
        _mm256_storeu_pd(yp + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(cplx a, cplx* x, std::size_t n) {
    double* xp = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d t = _mm256_xor_pd(_mm256_mul_pd(ai, xs), kFlipEven);
        _mm256_storeu_pd(xp + 2 * i, _mm256_fmadd_pd(ar, xv, t));
    }
    for (; i < n; ++i) x[i] *= a;
}

void matvec_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_avx2(a + r * cols, x, cols);
}

void matvec_real_avx2(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    const double* xp = reinterpret_cast<const double*>(x);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 2 <= cols; c += 2) {
            __m128d av = _mm_loadu_pd(row + c);
            __m256d aa = _mm256_permute4x64_pd(_mm256_castpd128_pd256(av), 0x50);
            __m256d xv = _mm256_loadu_pd(xp + 2 * c);
            acc = _mm256_fmadd_pd(aa, xv, acc);
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        lo = _mm_add_pd(lo, hi);
        double re = _mm_cvtsd_f64(lo);
        double im = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
        for (; c < cols; ++c) {
            re += row[c] * x[c].real();
            im += row[c] * x[c].imag();
        }
        y[r] = {re, im};
    }
}

#else // !CCQT_X86_64

bool avx2_available() { return false; }

cplx dot_conj_avx2(const cplx* x, const cplx* y, std::size_t n) { return dot_conj_scalar(x, y, n); }
cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n) { return dot_scalar(x, y, n); }
double norm_sq_avx2(const cplx* x, std::size_t n) { return norm_sq_scalar(x, n); }
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) { axpy_scalar(a, x, y, n); }
void scale_avx2(cplx a, cplx* x, std::size_t n) { scale_scalar(a, x, n); }
void matvec_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    matvec_scalar(a, x, y, rows, cols);
}
void matvec_real_avx2(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    matvec_real_scalar(a, x, y, rows, cols);
}

#endif

} // namespace ccqt::kernels::detail
