#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ganlab/dataset.hpp"
#include "ganlab/tensor.hpp"

namespace ganlab::data {

// Portable gray/pixmap support (P2/P3 ascii, P5/P6 binary, 8-bit). The
// in-memory convention is a [channels, h, w] tensor with values in [-1, 1].

struct PnmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;          // 1 (graymap) or 3 (pixmap)
    std::vector<unsigned char> pixels; // row-major, interleaved channels
};

PnmImage read_pnm(const std::string& path);
void write_pnm(const std::string& path, const PnmImage& image, bool binary = true);

engine::Tensor image_to_tensor(const PnmImage& image);        // [c,h,w] in [-1,1]
PnmImage tensor_to_image(const engine::Tensor& chw);          // quantizes to 8 bit

struct LoadReport {
    std::size_t loaded = 0;
    std::size_t skipped = 0;           // unreadable files, counted not fatal
    std::vector<std::string> paths;    // per loaded example, sorted order
};

// Loads every .pgm/.ppm in a folder (sorted by name), resizes to
// target_side x target_side by area averaging, scales to [-1, 1].
Dataset load_image_folder(const std::string& path, std::size_t target_side,
                          LoadReport* report = nullptr);

// Rescale [c,h,w] by box-filter area averaging.
engine::Tensor resize_area(const engine::Tensor& chw, std::size_t out_h, std::size_t out_w);

// Tile generated samples (rows of a [n, c*side*side] matrix) into one image
// grid for eyeballing.
PnmImage sample_grid(const engine::Tensor& samples, std::size_t channels, std::size_t side,
                     std::size_t grid_cols);

// Scatter rendering for 2-D point datasets, dot per sample.
PnmImage scatter_plot(const engine::Tensor& points, std::size_t side);

}  // namespace ganlab::data
