#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace gdiff {

// 3-channel real image, rows x cols per channel, row-major. PPM ingestion
// maps 8-bit values to [0,1]; computed fields (texture samples) may lie
// outside that range and are clamped only when written back to PPM.
struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::array<std::vector<double>, 3> channels;

    static Image zeros(std::size_t rows, std::size_t cols);
    double& at(std::size_t channel, std::size_t r, std::size_t c) {
        return channels[channel][r * cols + c];
    }
    double at(std::size_t channel, std::size_t r, std::size_t c) const {
        return channels[channel][r * cols + c];
    }
};

// Binary PPM (P6, maxval 255). Header comments are tolerated on read.
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& image);

}  // namespace gdiff
