#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ccqt/coherent.hpp"

using namespace ccqt::coherent;

namespace {

const Mode kA = Mode::letter('a');
const Mode kB = Mode::letter('b');
const Mode k1 = Mode::index(1);
const Mode k2 = Mode::index(2);

// Test-side oracle: overlap via the truncated Fock series
// sum_n conj(<n|beta>) <n|delta>, independent of the closed form under test.
cplx overlap_series(cplx beta, cplx delta, int nmax) {
    auto kernel = [](int n, cplx b) {
        cplx k = std::exp(cplx(-std::norm(b) / 2.0, 0));
        for (int q = 1; q <= n; ++q) k *= b / std::sqrt(double(q));
        return k;
    };
    cplx acc = 0.0;
    for (int n = 0; n <= nmax; ++n) acc += std::conj(kernel(n, beta)) * kernel(n, delta);
    return acc;
}

State random_state(std::mt19937_64& rng, std::vector<Mode> modes, int terms) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<Term> ts;
    for (int t = 0; t < terms; ++t) {
        Term term;
        term.weight = {u(rng), u(rng)};
        for (std::size_t m = 0; m < modes.size(); ++m) term.amps.push_back({u(rng), u(rng)});
        ts.push_back(std::move(term));
    }
    return State(std::move(modes), std::move(ts));
}

} // namespace

TEST_CASE("coherent overlap: identical, opposite, generic") {
    CHECK(std::abs(coherent_overlap({1, 0}, {1, 0}) - cplx(1, 0)) < 1e-15);
    // <1|-1> = e^{-2}
    CHECK(coherent_overlap({1, 0}, {-1, 0}).real() == doctest::Approx(std::exp(-2.0)));
    CHECK(coherent_overlap({1, 0}, {-1, 0}).imag() == doctest::Approx(0.0));
    // generic point against the Fock series oracle
    const cplx got = coherent_overlap({1, 1}, {2, 0});
    const cplx want = overlap_series({1, 1}, {2, 0}, 60);
    CHECK(std::abs(got - want) < 1e-12);
    CHECK(std::abs(got) <= 1.0 + 1e-15);
}

TEST_CASE("inner product basics") {
    State one = single_mode(kA, {0.7, 0.2});
    CHECK(std::abs(inner_product(one, one) - cplx(1, 0)) < 1e-15);

    // <cat+|cat+> with unnormalized |1> + |-1>: four overlaps expand to
    // 2(1 + e^{-2})
    State cat = cat_state(kA, 1.0, 1.0, 1.0);
    CHECK(norm_sq(cat) == doctest::Approx(2.0 * (1.0 + std::exp(-2.0))).epsilon(1e-14));

    // even and odd cats are orthogonal for any alpha
    for (double a : {0.3, 0.9, 2.2}) {
        State even = cat_state(kA, a, 1.0, 1.0);
        State odd = cat_state(kA, a, 1.0, -1.0);
        CHECK(std::abs(inner_product(even, odd)) < 1e-14);
    }

    State other = single_mode(kB, {0.1, 0.0});
    CHECK_THROWS_AS((void)inner_product(one, other), mode_error);
}

TEST_CASE("inner product is conjugate symmetric") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 25; ++it) {
        State x = random_state(rng, {kA, k1}, 3);
        State y = random_state(rng, {kA, k1}, 2);
        const cplx xy = inner_product(x, y);
        const cplx yx = inner_product(y, x);
        CHECK(std::abs(xy - std::conj(yx)) < 1e-12);
    }
}

TEST_CASE("normalize") {
    State single = single_mode(kA, {1, 0});
    State n = normalized(single);
    CHECK(norm_sq(n) == doctest::Approx(1.0).epsilon(1e-14));

    // |1> + |-1>: weights become 1/sqrt(2(1+e^{-2}))
    State cat = normalized(cat_state(kA, 1.0, 1.0, 1.0));
    const double expect = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0)));
    for (const auto& t : cat.terms()) CHECK(std::abs(t.weight) == doctest::Approx(expect));
    CHECK(cat.normalized_flag());

    State zero(std::vector<Mode>{kA}, {Term{0.0, {cplx(1, 0)}}});
    CHECK_THROWS_AS((void)normalized(zero), zero_norm_error);

    // cancelling cat: |a> - |a>
    State cancel(std::vector<Mode>{kA}, {Term{1.0, {cplx(1, 0)}}, Term{-1.0, {cplx(1, 0)}}});
    CHECK_THROWS_AS((void)normalized(cancel), zero_norm_error);
}

TEST_CASE("tensor") {
    State x = single_mode(kA, {1, 0}, {0.5, 0});
    State y = single_mode(k1, {0, 1}, {0, 2.0});
    State xy = tensor(x, y);
    CHECK(xy.term_count() == 1);
    CHECK(xy.terms()[0].weight == cplx(0, 1.0));

    CHECK_THROWS_AS((void)tensor(x, x), mode_error);

    // norm multiplicativity on random states
    std::mt19937_64 rng(5);
    for (int it = 0; it < 20; ++it) {
        State u = random_state(rng, {kA}, 2);
        State v = random_state(rng, {k1, k2}, 3);
        CHECK(norm_sq(tensor(u, v)) ==
              doctest::Approx(norm_sq(u) * norm_sq(v)).epsilon(1e-11));
    }
}

TEST_CASE("bps on coherent pairs") {
    const double a = 0.8;
    // (|a>,|a>) -> |sqrt2 a>|0>
    State in = tensor(single_mode(k1, {a, 0}), single_mode(k2, {a, 0}));
    State out = apply_bps(in, k1, k2, k1, k2);
    CHECK(std::abs(out.terms()[0].amps[0] - cplx(std::sqrt(2.0) * a, 0)) < 1e-15);
    CHECK(std::abs(out.terms()[0].amps[1]) < 1e-15);

    // (|a>,|0>) -> |a/sqrt2>|a/sqrt2>
    State in2 = tensor(single_mode(k1, {a, 0}), single_mode(k2, 0.0));
    State out2 = apply_bps(in2, k1, k2, k1, k2);
    CHECK(std::abs(out2.terms()[0].amps[0] - cplx(a / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(out2.terms()[0].amps[1] - cplx(a / std::sqrt(2.0), 0)) < 1e-15);

    CHECK_THROWS_AS((void)apply_bps(in, kA, k2, k1, k2), mode_error);
}

TEST_CASE("bps is an involution and preserves inner products") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 25; ++it) {
        State x = random_state(rng, {k1, k2}, 3);
        State twice = apply_bps(apply_bps(x, k1, k2, k1, k2), k1, k2, k1, k2);
        REQUIRE(twice.term_count() == x.term_count());
        for (std::size_t t = 0; t < x.term_count(); ++t)
            for (std::size_t m = 0; m < 2; ++m)
                CHECK(std::abs(twice.terms()[t].amps[m] - x.terms()[t].amps[m]) < 1e-12);

        State y = random_state(rng, {k1, k2}, 2);
        const cplx before = inner_product(x, y);
        const cplx after = inner_product(apply_bps(x, k1, k2, k1, k2),
                                         apply_bps(y, k1, k2, k1, k2));
        CHECK(std::abs(before - after) < 1e-10);
    }
}

TEST_CASE("phase shift") {
    State s = single_mode(kA, {0.5, 0.25});
    State same = phase_shift(s, kA, 0.0);
    CHECK(std::abs(same.terms()[0].amps[0] - s.terms()[0].amps[0]) < 1e-16);

    // theta = pi flips |a> to |-a>
    State flip = phase_shift(s, kA, M_PI);
    CHECK(std::abs(flip.terms()[0].amps[0] + s.terms()[0].amps[0]) < 1e-15);

    State twice = phase_shift(flip, kA, M_PI);
    CHECK(std::abs(twice.terms()[0].amps[0] - s.terms()[0].amps[0]) < 1e-15);
}

TEST_CASE("displacement group structure and unitarity") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 25; ++it) {
        State x = random_state(rng, {kA}, 3);
        const cplx delta{u(rng), u(rng)};
        // D(d) then D(-d): amplitudes restored, weight picks up a unit phase
        State back = displace(displace(x, kA, delta), kA, -delta);
        for (std::size_t t = 0; t < x.term_count(); ++t) {
            CHECK(std::abs(back.terms()[t].amps[0] - x.terms()[t].amps[0]) < 1e-13);
            CHECK(std::abs(std::abs(back.terms()[t].weight / x.terms()[t].weight) - 1.0) < 1e-12);
        }
        // inner products preserved between distinct states
        State y = random_state(rng, {kA}, 2);
        CHECK(std::abs(inner_product(x, y) -
                       inner_product(displace(x, kA, delta), displace(y, kA, delta))) < 1e-10);
        // and by the phase shifter too
        const double th = u(rng) * 3.0;
        CHECK(std::abs(inner_product(x, y) -
                       inner_product(phase_shift(x, kA, th), phase_shift(y, kA, th))) < 1e-10);
    }
}

TEST_CASE("displacement zero is identity") {
    State x = single_mode(kA, {0.4, -0.3}, {0.9, 0.1});
    State same = displace(x, kA, 0.0);
    CHECK(std::abs(same.terms()[0].weight - x.terms()[0].weight) < 1e-16);
    CHECK(std::abs(same.terms()[0].amps[0] - x.terms()[0].amps[0]) < 1e-16);
}

TEST_CASE("fock projection") {
    // n=0 on vacuum keeps the weight
    State vac = single_mode(kA, 0.0, {0.8, 0});
    State p0 = project_fock(vac, kA, 0);
    CHECK(p0.mode_count() == 0);
    CHECK(std::abs(p0.terms()[0].weight - cplx(0.8, 0)) < 1e-16);

    // n>=1 on vacuum kills the term
    State p1 = project_fock(vac, kA, 1);
    CHECK(std::abs(p1.terms()[0].weight) < 1e-18);

    // n=2 on beta = sqrt2: e^{-1} * 2 / sqrt(2) = sqrt2 e^{-1}
    State b = single_mode(kA, {std::sqrt(2.0), 0});
    State p2 = project_fock(b, kA, 2);
    CHECK(std::abs(p2.terms()[0].weight) ==
          doctest::Approx(std::sqrt(2.0) * std::exp(-1.0)).epsilon(1e-13));

    CHECK_THROWS_AS((void)project_fock(b, kA, -1), std::invalid_argument);
}

TEST_CASE("projection completeness over a single mode") {
    // sum_n ||<n|psi>||^2 recovers ||psi||^2 once the Poisson tail clears
    std::mt19937_64 rng(47);
    State x = random_state(rng, {kA}, 3);
    double bmax = 0.0;
    for (const auto& t : x.terms()) bmax = std::max(bmax, std::abs(t.amps[0]));
    const int nmax = 40;
    double acc = 0.0;
    for (int n = 0; n <= nmax; ++n) acc += norm_sq(project_fock(x, kA, n));
    CHECK(acc == doctest::Approx(norm_sq(x)).epsilon(1e-10));
}

TEST_CASE("prune merges duplicates and drops dust") {
    State dup(std::vector<Mode>{kA},
              {Term{{0.25, 0}, {cplx(1, 0)}}, Term{{0.25, 0}, {cplx(1, 0)}}});
    State merged = prune(dup, 0.0);
    CHECK(merged.term_count() == 1);
    CHECK(std::abs(merged.terms()[0].weight - cplx(0.5, 0)) < 1e-15);

    State mix(std::vector<Mode>{kA},
              {Term{{1.0, 0}, {cplx(1, 0)}}, Term{{1e-14, 0}, {cplx(-1, 0)}}});
    State cleaned = prune(mix, 1e-10);
    CHECK(cleaned.term_count() == 1);
    // norm change bounded by tol * term count
    CHECK(std::abs(norm_sq(cleaned) - norm_sq(mix)) < 1e-10 * 2);

    State untouched = prune(mix, 0.0);
    CHECK(untouched.term_count() == 2);
}

TEST_CASE("gram matrix is positive semidefinite") {
    std::mt19937_64 rng(59);
    for (int it = 0; it < 20; ++it) {
        State x = random_state(rng, {kA, k1}, 4);
        const auto g = gram_matrix(x);
        const int n = static_cast<int>(x.term_count());
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = g[static_cast<std::size_t>(i * n + j)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("json round trip") {
    State x(std::vector<Mode>{kA, k1},
            {Term{{0.5, -0.25}, {cplx(1.5, 0.5), cplx(-0.75, 0)}},
             Term{{0, 1}, {cplx(0, 0), cplx(2, -1)}}});
    State y = from_json(to_json(x));
    REQUIRE(y.term_count() == x.term_count());
    REQUIRE(y.modes() == x.modes());
    for (std::size_t t = 0; t < x.term_count(); ++t) {
        CHECK(std::abs(y.terms()[t].weight - x.terms()[t].weight) == 0.0);
        for (std::size_t m = 0; m < 2; ++m)
            CHECK(std::abs(y.terms()[t].amps[m] - x.terms()[t].amps[m]) == 0.0);
    }
}

TEST_CASE("state construction guards") {
    CHECK_THROWS_AS(State({kA, kA}, {}), mode_error);
    CHECK_THROWS_AS(State({kA}, {Term{1.0, {cplx(1, 0), cplx(0, 0)}}}), mode_error);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(State({kA}, {Term{{inf, 0}, {cplx(1, 0)}}}), std::invalid_argument);
    CHECK_THROWS_AS((void)Mode::index(13), mode_error);
    CHECK_THROWS_AS((void)Mode::letter('d'), mode_error);
}

TEST_CASE("relabel") {
    State x = single_mode(kA, {1, 0});
    State y = x.relabeled(kA, Mode::index(4));
    CHECK(y.has_mode(Mode::index(4)));
    CHECK(!y.has_mode(kA));
    State two = tensor(single_mode(kA, {1, 0}), single_mode(k1, {0, 0}));
    CHECK_THROWS_AS((void)two.relabeled(kA, k1), mode_error);
}
