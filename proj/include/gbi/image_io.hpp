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

#ifndef GBI_IMAGE_IO_HPP
#define GBI_IMAGE_IO_HPP

#include <string>

#include "gbi/raster.hpp"

namespace gbi {

/// Loads an 8-bit grayscale or RGB image (PNG or binary PGM), scaled to [0,1].
/// RGB is converted to luma 0.299R + 0.587G + 0.114B.
/// Throws IoError on unreadable files, FormatError on unsupported content.
Raster load_image(const std::string& path);

/// Loads an image and binarizes it: raw 8-bit value > 127 maps to 1.
Raster load_mask(const std::string& path);

/// Writes binary PGM (P5), values clamped to [0,1] then scaled by 255.
void save_pgm(const Raster& img, const std::string& path);

/// Writes 8-bit grayscale PNG with the same quantization as save_pgm.
void save_png(const Raster& img, const std::string& path);

/// Dispatches on the file extension (.png -> PNG, anything else -> PGM).
void save_image(const Raster& img, const std::string& path);

}  // namespace gbi

#endif  // GBI_IMAGE_IO_HPP
