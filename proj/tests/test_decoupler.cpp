#include <cmath>

#include "doctest.h"
#include "emk/decoupler.hpp"
#include "emk/errors.hpp"
#include "emk/rng.hpp"

using namespace emk;

namespace {

Matrix random_unit_rows(Index n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix w(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) w(i, j) = rng.normal();
        w.row(i) /= w.row(i).norm();
    }
    return w;
}

// Volume of the parallelepiped spanned by the rows of a (N-1) x N matrix.
double gram_volume(const Matrix& rows) {
    return std::sqrt((rows * rows.transpose()).determinant());
}

}  // namespace

TEST_SUITE("decoupler") {

TEST_CASE("identity rows give coordinate directions") {
    const Matrix w = Matrix::Identity(3, 3);
    const PerpVector p = perp_vector(w, 1);
    CHECK((p.h - Vector::Unit(3, 1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-dimensional hand geometry") {
    Matrix w(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    w << 1.0, 0.0, s, s;
    const PerpVector p = perp_vector(w, 0);
    CHECK(p.h(0) == doctest::Approx(s).epsilon(1e-12));
    CHECK(p.h(1) == doctest::Approx(-s).epsilon(1e-12));
}

TEST_CASE("determinant decomposition oracle over random matrices") {
    for (int rep = 0; rep < 25; ++rep) {
        const Index n = 6;
        const Matrix w = random_unit_rows(n, 100 + rep);
        const double det = std::abs(w.determinant());
        for (Index m = 0; m < n; ++m) {
            const PerpVector p = perp_vector(w, m);
            Matrix rest(n - 1, n);
            Index r = 0;
            for (Index j = 0; j < n; ++j)
                if (j != m) rest.row(r++) = w.row(j);
            const double decomposed = std::abs(p.h.dot(w.row(m))) * gram_volume(rest);
            CHECK(std::abs(decomposed - det) < 1e-8);
        }
    }
}

TEST_CASE("orthogonality, unit norm, and sign invariants") {
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 2 + rep % 7;
        const Matrix w = random_unit_rows(n, 500 + rep);
        for (Index m = 0; m < n; ++m) {
            const PerpVector p = perp_vector(w, m);
            CHECK(std::abs(p.h.norm() - 1.0) < 1e-12);
            CHECK(p.h.dot(w.row(m)) > 0.0);
            for (Index j = 0; j < n; ++j) {
                if (j == m) continue;
                CHECK(std::abs(p.h.dot(w.row(j))) < 1e-10);
            }
        }
    }
}

TEST_CASE("rank-deficient remaining rows are rejected") {
    Matrix w = random_unit_rows(4, 9);
    w.row(2) = w.row(3);  // rows other than 0 are dependent
    CHECK_THROWS_AS(perp_vector(w, 0), DegenerateDemixing);
}

TEST_CASE("h depends only on the other rows") {
    const Matrix w = random_unit_rows(5, 77);
    const PerpVector first = perp_vector(w, 2);
    const PerpVector again = perp_vector(w, 2);
    CHECK(first.h == again.h);  // bitwise stable

    // Nudging w_m without crossing the hyperplane must not move h at all.
    Matrix w2 = w;
    w2.row(2) += 0.01 * w.row(0);
    w2.row(2) /= w2.row(2).norm();
    const PerpVector moved = perp_vector(w2, 2);
    CHECK(first.h == moved.h);
}

TEST_CASE("single row degenerates to its sign") {
    Matrix w(1, 1);
    w << -0.5;
    const PerpVector p = perp_vector(w, 0);
    CHECK(p.h(0) == -1.0);
}

}  // TEST_SUITE
