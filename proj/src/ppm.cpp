#include "gdiff/ppm.hpp"

#include <cmath>
#include <fstream>

#include "gdiff/errors.hpp"

namespace gdiff {

Image Image::zeros(std::size_t rows, std::size_t cols) {
    Image img;
    img.rows = rows;
    img.cols = cols;
    for (auto& ch : img.channels) ch.assign(rows * cols, 0.0);
    return img;
}

namespace {
// Reads the next header token, skipping whitespace and # comments.
std::string next_token(std::istream& in, const std::string& path) {
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
    if (tok.empty()) throw IngestError(path + ": truncated PPM header");
    return tok;
}

std::size_t parse_dim(const std::string& tok, const std::string& path) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw IngestError(path + ": bad PPM header field '" + tok + "'");
    }
    unsigned long v = std::stoul(tok);
    if (v == 0) throw IngestError(path + ": zero PPM dimension");
    return static_cast<std::size_t>(v);
}
}  // namespace

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(path + ": cannot open for reading");

    if (next_token(in, path) != "P6") {
        throw IngestError(path + ": not a binary PPM (P6) file");
    }
    std::size_t width = parse_dim(next_token(in, path), path);
    std::size_t height = parse_dim(next_token(in, path), path);
    std::size_t maxval = parse_dim(next_token(in, path), path);
    if (maxval != 255) {
        throw IngestError(path + ": unsupported PPM maxval " +
                          std::to_string(maxval) + " (need 255)");
    }
    // The header terminator was consumed by the token reader; pixel data
    // starts immediately after the single whitespace following maxval.

    Image img = Image::zeros(height, width);
    std::vector<unsigned char> raw(width * height * 3);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw IngestError(path + ": truncated PPM pixel data");
    }
    for (std::size_t p = 0; p < width * height; ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            img.channels[c][p] = static_cast<double>(raw[p * 3 + c]) / 255.0;
        }
    }
    return img;
}

void write_ppm(const std::string& path, const Image& image) {
    if (image.rows == 0 || image.cols == 0) {
        throw DomainError(path + ": refusing to write empty image");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError(path + ": cannot open for writing");
    out << "P6\n" << image.cols << ' ' << image.rows << "\n255\n";
    std::vector<unsigned char> raw(image.rows * image.cols * 3);
    for (std::size_t p = 0; p < image.rows * image.cols; ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            double v = image.channels[c][p];
            v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            raw[p * 3 + c] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) throw DomainError(path + ": write failed");
}

}  // namespace gdiff
