#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "emk/csv.hpp"
#include "emk/errors.hpp"
#include "emk/pgm.hpp"
#include "emk/rng.hpp"

using namespace emk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("emk_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv round trip is exact, including extreme magnitudes") {
    TempDir dir;
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix m(3 + rep % 3, 4 + rep % 5);
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                m(i, j) = rng.normal() * std::pow(10.0, rng.uniform_int(-30, 30));
        m(0, 0) = 0.0;
        m(0, 1) = -1e-300;
        m(0, 2) = 1e300;
        const std::string path = dir.file("m.csv");
        write_csv(path, m);
        const Matrix back = read_csv(path);
        REQUIRE(back.rows() == m.rows());
        REQUIRE(back.cols() == m.cols());
        CHECK(back == m);
    }
}

TEST_CASE("csv parse failures") {
    TempDir dir;
    {
        std::ofstream out(dir.file("ragged.csv"));
        out << "1,2,3\n4,5\n";
    }
    CHECK_THROWS_AS(read_csv(dir.file("ragged.csv")), IoError);
    {
        std::ofstream out(dir.file("junk.csv"));
        out << "1,two,3\n";
    }
    CHECK_THROWS_AS(read_csv(dir.file("junk.csv")), IoError);
    CHECK_THROWS_AS(read_csv(dir.file("missing.csv")), IoError);
    {
        std::ofstream out(dir.file("empty.csv"));
    }
    CHECK_THROWS_AS(read_csv(dir.file("empty.csv")), IoError);
}

TEST_CASE("pgm round trip preserves 8-bit pixels") {
    TempDir dir;
    GrayImage img;
    img.width = 33;
    img.height = 17;
    img.pixels.resize(17, 33);
    Rng rng(7);
    for (Index r = 0; r < 17; ++r)
        for (Index c = 0; c < 33; ++c)
            img.pixels(r, c) = static_cast<double>(rng.uniform_int(0, 255));
    const std::string path = dir.file("img.pgm");
    write_pgm(path, img);
    const GrayImage back = read_pgm(path);
    REQUIRE(back.width == 33);
    REQUIRE(back.height == 17);
    CHECK(back.pixels == img.pixels);
}

TEST_CASE("pgm rejects other formats") {
    TempDir dir;
    {
        std::ofstream out(dir.file("ascii.pgm"));
        out << "P2\n2 2\n255\n0 1 2 3\n";
    }
    CHECK_THROWS_AS(read_pgm(dir.file("ascii.pgm")), IoError);
    {
        std::ofstream out(dir.file("short.pgm"), std::ios::binary);
        out << "P5\n4 4\n255\nxy";
    }
    CHECK_THROWS_AS(read_pgm(dir.file("short.pgm")), IoError);
}

TEST_CASE("rescaling maps any range onto 0..255") {
    Matrix v(2, 3);
    v << -5.0, 0.0, 5.0, 1.0, 2.0, 3.0;
    const GrayImage img = to_image(v);
    CHECK(img.pixels.minCoeff() == doctest::Approx(0.0));
    CHECK(img.pixels.maxCoeff() == doctest::Approx(255.0));
    const GrayImage flat = to_image(Matrix::Constant(2, 2, 9.0));
    CHECK(flat.pixels(0, 0) == doctest::Approx(127.0));
}

}  // TEST_SUITE
