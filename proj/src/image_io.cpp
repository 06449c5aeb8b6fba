// Copyright 2026 the gbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gbi/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace gbi {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Skips PNM whitespace and '#' comments, then parses one unsigned integer.
int read_pnm_int(std::istream& in) {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#')
            while (c != EOF && c != '\n')
                c = in.get();
        c = in.get();
    }
    int value = -1;
    while (c != EOF && std::isdigit(c)) {
        if (value < 0)
            value = 0;
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

Raster load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw FormatError(path + ": not a binary PGM (P5)");
    const int w = read_pnm_int(in);
    const int h = read_pnm_int(in);
    const int maxval = read_pnm_int(in);
    if (w < 1 || h < 1 || maxval < 1)
        throw FormatError(path + ": malformed PGM header");
    if (maxval > 255)
        throw FormatError(path + ": unsupported bit depth (maxval > 255)");
    // Exactly one whitespace byte separates the header from the raster.
    std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw FormatError(path + ": truncated PGM data");

    Raster img(w, h);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        img.data()[i] = bytes[i] / static_cast<double>(maxval);
    return img;
}

bool has_png_signature(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

Raster load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp)
        throw IoError("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("libpng: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng: out of memory");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": corrupt PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": unsupported bit depth (" + std::to_string(bit_depth) + ")");
    }
    png_set_expand(png);  // palette -> RGB, gray 1/2/4 -> 8, tRNS -> alpha
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path + ": unsupported channel count");
    }

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    pixels.assign(rowbytes * h, 0);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        row_ptrs[y] = pixels.data() + y * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Raster img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = pixels.data() + y * rowbytes;
        for (png_uint_32 x = 0; x < w; ++x) {
            double v;
            if (channels == 1) {
                v = row[x] / 255.0;
            } else {
                v = (kLumaR * row[3 * x] + kLumaG * row[3 * x + 1] + kLumaB * row[3 * x + 2]) / 255.0;
            }
            img.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return img;
}

unsigned char quantize(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned char>(v * 255.0 + 0.5);
}

}  // namespace

Raster load_image(const std::string& path) {
    if (has_png_signature(path))
        return load_png(path);
    return load_pgm(path);
}

Raster load_mask(const std::string& path) {
    Raster img = load_image(path);
    for (double& v : img.data())
        v = v > 127.5 / 255.0 ? 1.0 : 0.0;
    return img;
}

void save_pgm(const Raster& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> bytes(img.size());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = quantize(img.data()[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path);
}

void save_png(const Raster& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp)
        throw IoError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("libpng: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng: out of memory");
    }
    std::vector<unsigned char> bytes(img.size());
    std::vector<png_bytep> rows(img.height());
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng: write failed for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = quantize(img.data()[i]);
    for (int y = 0; y < img.height(); ++y)
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * img.width();
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_image(const Raster& img, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0)
        save_png(img, path);
    else
        save_pgm(img, path);
}

}  // namespace gbi
