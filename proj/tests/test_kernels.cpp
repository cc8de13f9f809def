#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "ccqt/kernels.hpp"

using namespace ccqt::kernels;

namespace {

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {u(rng), u(rng)};
    return v;
}

} // namespace

TEST_CASE("dispatcher reports a valid isa") {
    const Isa isa = detected_isa();
    CHECK((isa == Isa::Scalar || isa == Isa::Avx2));
    CHECK(active_isa() == isa);
}

TEST_CASE("simd variants agree with the scalar reference") {
    // Equivalence gate for the runtime-dispatched kernels. When AVX2 is
    // unavailable the dispatched path is the reference itself and the test
    // degenerates to a smoke check.
    std::mt19937_64 rng(20240811);
    for (std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(3), std::size_t(7),
                          std::size_t(64), std::size_t(1001)}) {
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);

        const cplx d_ref = detail::dot_conj_scalar(x.data(), y.data(), n);
        const cplx d_disp = dot_conj(x.data(), y.data(), n);
        CHECK(std::abs(d_ref - d_disp) < 1e-12 * (1.0 + std::abs(d_ref)));

        const cplx u_ref = detail::dot_scalar(x.data(), y.data(), n);
        const cplx u_disp = dot(x.data(), y.data(), n);
        CHECK(std::abs(u_ref - u_disp) < 1e-12 * (1.0 + std::abs(u_ref)));

        CHECK(norm_sq(x.data(), n) ==
              doctest::Approx(detail::norm_sq_scalar(x.data(), n)).epsilon(1e-12));

        const cplx a{0.3, -1.7};
        auto y1 = y, y2 = y;
        detail::axpy_scalar(a, x.data(), y1.data(), n);
        axpy(a, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);

        auto x1 = x, x2 = x;
        detail::scale_scalar(a, x1.data(), n);
        scale(a, x2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x1[i] - x2[i]) < 1e-13);
    }
}

TEST_CASE("matvec variants agree") {
    std::mt19937_64 rng(7);
    for (std::size_t rows : {std::size_t(1), std::size_t(5), std::size_t(17)}) {
        for (std::size_t cols : {std::size_t(1), std::size_t(8), std::size_t(33)}) {
            auto a = random_vec(rng, rows * cols);
            auto x = random_vec(rng, cols);
            std::vector<cplx> y1(rows), y2(rows);
            detail::matvec_scalar(a.data(), x.data(), y1.data(), rows, cols);
            matvec(a.data(), x.data(), y2.data(), rows, cols);
            for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-12);

            std::vector<double> ar(rows * cols);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (auto& v : ar) v = u(rng);
            detail::matvec_real_scalar(ar.data(), x.data(), y1.data(), rows, cols);
            matvec_real(ar.data(), x.data(), y2.data(), rows, cols);
            for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-12);
        }
    }
}

TEST_CASE("force_isa pins and restores the dispatcher") {
    const Isa original = detected_isa();
    force_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    std::vector<cplx> x = {{1, 2}, {3, -4}};
    CHECK(norm_sq(x.data(), 2) == doctest::Approx(1 + 4 + 9 + 16));
    force_isa(original);
    CHECK(active_isa() == original);
}
