#include <cmath>
#include <limits>

#include "doctest.h"
#include "emk/errors.hpp"
#include "emk/preprocess.hpp"
#include "emk/rng.hpp"

using namespace emk;

namespace {

Matrix random_matrix(Index n, Index t, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, t);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < t; ++j) x(i, j) = rng.normal();
    return x;
}

Matrix sample_cov(const Matrix& m) {
    const Matrix c = m.colwise() - m.rowwise().mean();
    return (c * c.transpose()) / static_cast<double>(m.cols() - 1);
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("center removes the row means") {
    Matrix x(2, 2);
    x << 1, 3, 2, 2;
    const auto res = center(x);
    CHECK(res.mean(0) == doctest::Approx(2.0));
    CHECK(res.mean(1) == doctest::Approx(2.0));
    CHECK(res.centered(0, 0) == doctest::Approx(-1.0));
    CHECK(res.centered(0, 1) == doctest::Approx(1.0));
    CHECK(res.centered(1, 0) == doctest::Approx(0.0));
    CHECK(res.centered(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("center maps constant rows to zero") {
    Matrix x = Matrix::Constant(3, 10, 4.2);
    CHECK(center(x).centered.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("center mean accuracy on normal data") {
    const Matrix x = random_matrix(4, 1000, 99);
    const auto res = center(x);
    CHECK(res.centered.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("center rejects bad input") {
    Matrix x = Matrix::Zero(2, 5);
    x(1, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(center(x), InvalidData);
    CHECK_THROWS_AS(center(Matrix::Zero(2, 1)), TooFewSamples);
}

TEST_CASE("whiten produces identity covariance and an exact inverse") {
    const Matrix x = random_matrix(4, 4000, 5);
    const auto res = whiten(center(x).centered);
    const Matrix cov = sample_cov(res.Z);
    CHECK((cov - Matrix::Identity(4, 4)).norm() < 1e-8);
    CHECK((res.transform.forward * res.transform.inverse - Matrix::Identity(4, 4)).norm() <
          1e-10);
}

TEST_CASE("whitening already-white data is orthogonal") {
    const Matrix x = random_matrix(3, 5000, 17);
    const auto first = whiten(center(x).centered);
    const auto second = whiten(first.Z);
    CHECK((sample_cov(second.Z) - Matrix::Identity(3, 3)).norm() < 1e-8);
    // cov is already the identity, so the new forward factor is orthogonal
    const Matrix& v = second.transform.forward;
    CHECK((v * v.transpose() - Matrix::Identity(3, 3)).norm() < 1e-6);
}

TEST_CASE("diagonal scaling is undone up to an orthogonal factor") {
    const Matrix white = whiten(center(random_matrix(2, 6000, 23)).centered).Z;
    Matrix scaled = white;
    scaled.row(0) *= 2.0;
    scaled.row(1) *= 3.0;
    const auto res = whiten(scaled);
    CHECK((sample_cov(res.Z) - Matrix::Identity(2, 2)).norm() < 1e-8);
    Matrix d(2, 2);
    d << 2.0, 0.0, 0.0, 3.0;
    const Matrix q = res.transform.forward * d;
    CHECK((q * q.transpose() - Matrix::Identity(2, 2)).norm() < 1e-6);
}

TEST_CASE("duplicated row triggers RankDeficient") {
    Matrix x = random_matrix(3, 500, 31);
    x.row(2) = x.row(0);
    CHECK_THROWS_AS(whiten(center(x).centered), RankDeficient);
}

TEST_CASE("round trip through the inverse recovers the input") {
    const Matrix xc = center(random_matrix(5, 2000, 47)).centered;
    const auto res = whiten(xc);
    const Matrix back = res.transform.inverse * res.Z;
    CHECK((back - xc).norm() / xc.norm() < 1e-10);
}

TEST_CASE("whitening is deterministic") {
    const Matrix xc = center(random_matrix(3, 800, 53)).centered;
    const auto a = whiten(xc);
    const auto b = whiten(xc);
    CHECK(a.transform.forward == b.transform.forward);
    CHECK(a.Z == b.Z);
}

}  // TEST_SUITE
