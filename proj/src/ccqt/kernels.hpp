#pragma once
// Complex-double vector kernels used by the state algebra, the Fock engine
// and the enumeration loops. A scalar reference implementation always
// exists; on x86-64 an AVX2+FMA variant is selected at runtime when the
// CPU supports it. Both variants are equivalence-tested against each other.

#include <complex>
#include <cstddef>

namespace ccqt::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// ISA picked by the runtime dispatcher (honours force_isa overrides).
Isa active_isa();

/// Pin the dispatcher to one implementation. Throws std::runtime_error if
/// the requested ISA is not available on this machine. Intended for the
/// equivalence tests; pass the detected default to undo.
void force_isa(Isa isa);

/// ISA the dispatcher would pick with no override in place.
Isa detected_isa();

const char* isa_name(Isa isa);

/// sum_i conj(x[i]) * y[i]
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n);

/// sum_i x[i] * y[i] (no conjugation)
cplx dot(const cplx* x, const cplx* y, std::size_t n);

/// sum_i |x[i]|^2
double norm_sq(const cplx* x, std::size_t n);

/// y[i] += a * x[i]
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);

/// x[i] *= a
void scale(cplx a, cplx* x, std::size_t n);

/// y = A x with A row-major (rows x cols), complex entries.
void matvec(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);

/// y = A x with A row-major real (rows x cols), complex x.
void matvec_real(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);

namespace detail {
// Reference implementations (always compiled, used as the oracle in tests).
cplx dot_conj_scalar(const cplx* x, const cplx* y, std::size_t n);
cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n);
double norm_sq_scalar(const cplx* x, std::size_t n);
void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n);
void scale_scalar(cplx a, cplx* x, std::size_t n);
void matvec_scalar(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);
void matvec_real_scalar(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);

// AVX2 variants; only callable when avx2_available() returns true.
bool avx2_available();
cplx dot_conj_avx2(const cplx* x, const cplx* y, std::size_t n);
cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n);
double norm_sq_avx2(const cplx* x, std::size_t n);
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n);
void scale_avx2(cplx a, cplx* x, std::size_t n);
void matvec_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);
void matvec_real_avx2(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);
} // namespace detail

} // namespace ccqt::kernels
