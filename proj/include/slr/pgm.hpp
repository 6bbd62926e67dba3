#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "slr/errors.hpp"

namespace slr {

struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 255;
    std::vector<std::uint8_t> pixels;  // row-major, height*width bytes
};

namespace detail {

// Skips whitespace and '#' comment lines, then reads one unsigned decimal.
inline unsigned long pgm_read_number(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw BadImageFormat("pgm: malformed header in " + path);
    unsigned long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + static_cast<unsigned long>(c - '0');
        c = in.get();
    }
    if (c != EOF) in.unget();
    return value;
}

}  // namespace detail

// Binary (P5) PGM reader. maxval must fit one byte.
inline PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadImageFormat("pgm: cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw BadImageFormat("pgm: not a binary P5 file: " + path);

    PgmImage img;
    img.width = detail::pgm_read_number(in, path);
    img.height = detail::pgm_read_number(in, path);
    const unsigned long maxval = detail::pgm_read_number(in, path);
    if (img.width == 0 || img.height == 0)
        throw BadImageFormat("pgm: zero dimensions in " + path);
    if (maxval == 0 || maxval > 255)
        throw BadImageFormat("pgm: maxval " + std::to_string(maxval) +
                             " unsupported (must be 1..255) in " + path);
    img.maxval = static_cast<unsigned>(maxval);

    // Exactly one whitespace byte separates the header from the raster.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        throw BadImageFormat("pgm: missing raster separator in " + path);

    img.pixels.resize(img.width * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.pixels.size())
        throw BadImageFormat("pgm: truncated raster in " + path);
    return img;
}

inline void write_pgm(const std::string& path, const PgmImage& img) {
    if (img.pixels.size() != img.width * img.height)
        throw InvalidInput("pgm: pixel buffer size mismatch");
    if (img.maxval == 0 || img.maxval > 255)
        throw InvalidInput("pgm: maxval must be 1..255");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("pgm: cannot open " + path + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

// Pixel values scaled to [0, 1] by maxval, row-major.
inline std::vector<double> pgm_to_unit_vector(const PgmImage& img) {
    std::vector<double> v(img.pixels.size());
    const double scale = 1.0 / static_cast<double>(img.maxval);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(img.pixels[i]) * scale;
    return v;
}

}  // namespace slr
