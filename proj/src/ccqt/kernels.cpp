#include "ccqt/kernels.hpp"

#include <stdexcept>

namespace ccqt::kernels {

namespace detail {

cplx dot_conj_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    return {re, im};
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(cplx a, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void matvec_scalar(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_scalar(a + r * cols, x, cols);
}

void matvec_real_scalar(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double re = 0.0, im = 0.0;
        const double* row = a + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            re += row[c] * x[c].real();
            im += row[c] * x[c].imag();
        }
        y[r] = {re, im};
    }
}

} // namespace detail

namespace {

Isa g_isa = detail::avx2_available() ? Isa::Avx2 : Isa::Scalar;

} // namespace

Isa detected_isa() {
    return detail::avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa() { return g_isa; }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !detail::avx2_available())
        throw std::runtime_error("kernels: AVX2 not available on this CPU");
    g_isa = isa;
}

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "?";
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t n) {
    return g_isa == Isa::Avx2 ? detail::dot_conj_avx2(x, y, n)
                              : detail::dot_conj_scalar(x, y, n);
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
    return g_isa == Isa::Avx2 ? detail::dot_avx2(x, y, n)
                              : detail::dot_scalar(x, y, n);
}

double norm_sq(const cplx* x, std::size_t n) {
    return g_isa == Isa::Avx2 ? detail::norm_sq_avx2(x, n)
                              : detail::norm_sq_scalar(x, n);
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    if (g_isa == Isa::Avx2) detail::axpy_avx2(a, x, y, n);
    else detail::axpy_scalar(a, x, y, n);
}

void scale(cplx a, cplx* x, std::size_t n) {
    if (g_isa == Isa::Avx2) detail::scale_avx2(a, x, n);
    else detail::scale_scalar(a, x, n);
}

void matvec(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    if (g_isa == Isa::Avx2) detail::matvec_avx2(a, x, y, rows, cols);
    else detail::matvec_scalar(a, x, y, rows, cols);
}

void matvec_real(const double* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    if (g_isa == Isa::Avx2) detail::matvec_real_avx2(a, x, y, rows, cols);
    else detail::matvec_real_scalar(a, x, y, rows, cols);
}

} // namespace ccqt::kernels
