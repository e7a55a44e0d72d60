#ifndef EMK_PGM_HPP
#define EMK_PGM_HPP

#include <string>

#include "emk/types.hpp"

namespace emk {

struct GrayImage {
    Index width = 0;
    Index height = 0;
    Matrix pixels;  // height x width, values in [0, 255]
};

/// Reads an 8-bit binary (P5) PGM file. Throws IoError on any other format.
GrayImage read_pgm(const std::string& path);

/// Writes an 8-bit binary PGM, clamping pixel values to [0, 255].
void write_pgm(const std::string& path, const GrayImage& image);

/// Linearly rescales an arbitrary real-valued matrix to the full 0..255 range
/// (constant input maps to mid-gray).
GrayImage to_image(const Matrix& values);

}  // namespace emk

#endif
