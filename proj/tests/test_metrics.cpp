#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "emk/errors.hpp"
#include "emk/metrics.hpp"
#include "emk/rng.hpp"
#include "emk/sources.hpp"

using namespace emk;

namespace {

// Exhaustive oracle for the assignment problem.
std::pair<std::vector<Index>, double> brute_force_max(const Matrix& score) {
    const Index n = score.rows();
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Index> best = perm;
    double best_total = -1e300;
    do {
        double total = 0.0;
        for (Index i = 0; i < n; ++i) total += score(i, perm[i]);
        if (total > best_total) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_total};
}

Matrix random_gain(Index n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix g = Matrix::Identity(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) += 0.2 * rng.normal();
    return g;
}

WhiteningTransform identity_whitening(Index n) {
    WhiteningTransform w;
    w.mean = Vector::Zero(n);
    w.forward = Matrix::Identity(n, n);
    w.inverse = Matrix::Identity(n, n);
    return w;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("gain matrix composes demixing, whitening, and mixing") {
    Rng rng(8);
    const Index n = 4;
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();

    SUBCASE("perfect separation gives the identity") {
        const Matrix w = a.inverse();
        const Matrix g = gain_matrix(w, identity_whitening(n), a);
        CHECK((g - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("signed permutations survive the composition") {
        Matrix p = Matrix::Zero(n, n);
        p(0, 2) = 1.0;
        p(1, 0) = -1.0;
        p(2, 3) = 1.0;
        p(3, 1) = -1.0;
        const Matrix w = p * a.inverse();
        const Matrix g = gain_matrix(w, identity_whitening(n), a);
        CHECK((g - p).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("applying the gain to sources reproduces the estimates") {
        Matrix s(n, 500);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < 500; ++j) s(i, j) = rng.normal();
        const Matrix w = random_gain(n, 77);
        const Matrix x = a * s;
        const Matrix y = w * x;  // whitening = identity here
        const Matrix g = gain_matrix(w, identity_whitening(n), a);
        CHECK((g * s - y).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("isr reference values") {
    CHECK(isr_db(Matrix::Identity(3, 3)) == -300.0);
    Matrix g(2, 2);
    g << 1.0, 0.1, 0.1, 1.0;
    CHECK(isr_db(g) == doctest::Approx(-20.0).epsilon(1e-12));
    Matrix p = Matrix::Zero(3, 3);
    p(0, 1) = -1.0;
    p(1, 2) = 1.0;
    p(2, 0) = 1.0;
    CHECK(isr_db(p) == -300.0);
    CHECK_THROWS_AS(isr_db(Matrix::Zero(2, 2)), DegenerateGain);
}

TEST_CASE("isr is invariant under permutation, sign, and row scale") {
    Rng rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 2 + rep % 5;
        const Matrix g = random_gain(n, 300 + rep);
        const double base = isr_db(g);

        std::vector<Index> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (Index i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_int(0, static_cast<int>(i))]);

        Matrix shuffled(n, n);
        for (Index i = 0; i < n; ++i) {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            const double scale = sign * rng.uniform(0.2, 5.0);
            shuffled.row(perm[i]) = scale * g.row(i);
        }
        CHECK(isr_db(shuffled) == doctest::Approx(base).epsilon(1e-12));

        Matrix cols(n, n);
        for (Index j = 0; j < n; ++j) cols.col(perm[j]) = g.col(j);
        CHECK(isr_db(cols) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("pairing identities") {
    Rng rng(21);
    Matrix s(3, 400);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 400; ++j) s(i, j) = rng.normal();

    SUBCASE("self pairing is the identity") {
        const Pairing p = pair_sources(s, s);
        for (Index i = 0; i < 3; ++i) {
            CHECK(p.permutation[i] == i);
            CHECK(p.correlations(i) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("row reversal and sign flips are undone") {
        Matrix y(3, 400);
        y.row(0) = -s.row(2);
        y.row(1) = s.row(1);
        y.row(2) = -s.row(0);
        const Pairing p = pair_sources(s, y);
        CHECK(p.permutation[0] == 2);
        CHECK(p.permutation[1] == 1);
        CHECK(p.permutation[2] == 0);
        for (Index i = 0; i < 3; ++i)
            CHECK(p.correlations(i) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero-variance rows are rejected") {
        Matrix y = s;
        y.row(1).setConstant(3.0);
        CHECK_THROWS_AS(pair_sources(s, y), DegenerateSource);
    }
}

TEST_CASE("assignment beats greedy pairing where greedy is suboptimal") {
    Matrix c(3, 3);
    c << 0.90, 0.88, 0.10,
         0.86, 0.20, 0.15,
         0.30, 0.85, 0.60;
    // Greedy row-by-row takes (0,0), (1,1)=0.20 after losing column 0, total
    // 1.70; the optimum reassigns column 0.
    const auto [oracle_perm, oracle_total] = brute_force_max(c);
    const std::vector<Index> got = solve_assignment_max(c);
    double got_total = 0.0;
    for (Index i = 0; i < 3; ++i) got_total += c(i, got[i]);
    CHECK(got_total == doctest::Approx(oracle_total).epsilon(1e-12));
    CHECK(got == oracle_perm);

    double greedy_total = 0.0;
    std::vector<bool> taken(3, false);
    for (Index i = 0; i < 3; ++i) {
        Index best = -1;
        for (Index j = 0; j < 3; ++j)
            if (!taken[j] && (best < 0 || c(i, j) > c(i, best))) best = j;
        taken[best] = true;
        greedy_total += c(i, best);
    }
    CHECK(greedy_total < oracle_total);
}

TEST_CASE("assignment matches brute force on random matrices") {
    Rng rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        const Index n = 2 + rep % 5;
        Matrix score(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) score(i, j) = rng.uniform01();
        const std::vector<Index> got = solve_assignment_max(score);
        double got_total = 0.0;
        for (Index i = 0; i < n; ++i) got_total += score(i, got[i]);
        CHECK(got_total == doctest::Approx(brute_force_max(score).second).epsilon(1e-12));
    }
}

TEST_CASE("assignment total dominates every explicit permutation") {
    Rng rng(37);
    for (int rep = 0; rep < 20; ++rep) {
        const Index n = 6;
        Matrix score(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) score(i, j) = rng.uniform01();
        const std::vector<Index> got = solve_assignment_max(score);
        double got_total = 0.0;
        for (Index i = 0; i < n; ++i) got_total += score(i, got[i]);

        std::vector<Index> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double total = 0.0;
            for (Index i = 0; i < n; ++i) total += score(i, perm[i]);
            CHECK(got_total >= total - 1e-12);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("amdahl reference points and monotonicity") {
    CHECK(amdahl_speedup(1.0, 4.0) == doctest::Approx(4.0));
    CHECK(amdahl_speedup(0.0, 16.0) == doctest::Approx(1.0));
    CHECK(amdahl_speedup(0.95, 4.0) == doctest::Approx(3.47826086956).epsilon(1e-6));
    CHECK_THROWS_AS(amdahl_speedup(1.5, 2.0), InvalidParameter);
    CHECK_THROWS_AS(amdahl_speedup(0.5, 0.5), InvalidParameter);

    Rng rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        const double f = rng.uniform01();
        const double f2 = f + (1.0 - f) * rng.uniform01();
        const double s = 1.0 + rng.uniform(0.0, 15.0);
        const double s2 = s + rng.uniform(0.0, 8.0);
        CHECK(amdahl_speedup(f2, s) >= amdahl_speedup(f, s) - 1e-12);
        CHECK(amdahl_speedup(f, s2) >= amdahl_speedup(f, s) - 1e-12);
    }
}

}  // TEST_SUITE
