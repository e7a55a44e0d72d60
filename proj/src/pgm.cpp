#include "emk/pgm.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "emk/errors.hpp"

namespace emk {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_pgm: cannot open " + path);

    if (next_token(in) != "P5")
        throw IoError("read_pgm: " + path + " is not a binary (P5) PGM");
    GrayImage img;
    try {
        img.width = std::stol(next_token(in));
        img.height = std::stol(next_token(in));
        const long maxval = std::stol(next_token(in));
        if (maxval != 255)
            throw IoError("read_pgm: only 8-bit images supported in " + path);
    } catch (const IoError&) {
        throw;
    } catch (const std::exception&) {
        throw IoError("read_pgm: malformed header in " + path);
    }
    if (img.width <= 0 || img.height <= 0)
        throw IoError("read_pgm: bad dimensions in " + path);

    std::string bytes(static_cast<std::size_t>(img.width * img.height), '\0');
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw IoError("read_pgm: truncated pixel data in " + path);

    img.pixels.resize(img.height, img.width);
    for (Index r = 0; r < img.height; ++r)
        for (Index c = 0; c < img.width; ++c)
            img.pixels(r, c) = static_cast<double>(
                static_cast<unsigned char>(bytes[static_cast<std::size_t>(r * img.width + c)]));
    return img;
}

void write_pgm(const std::string& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_pgm: cannot open " + path);
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    std::string bytes;
    bytes.reserve(static_cast<std::size_t>(image.width * image.height));
    for (Index r = 0; r < image.height; ++r) {
        for (Index c = 0; c < image.width; ++c) {
            const double v = std::round(image.pixels(r, c));
            const double clamped = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
            bytes.push_back(static_cast<char>(static_cast<unsigned char>(clamped)));
        }
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write_pgm: write failed for " + path);
}

GrayImage to_image(const Matrix& values) {
    GrayImage img;
    img.height = values.rows();
    img.width = values.cols();
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (hi > lo) {
        img.pixels = (values.array() - lo) / (hi - lo) * 255.0;
    } else {
        img.pixels = Matrix::Constant(values.rows(), values.cols(), 127.0);
    }
    return img;
}

}  // namespace emk
