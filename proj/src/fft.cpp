#include "gdiff/fft.hpp"

#include <cmath>

#include "gdiff/errors.hpp"

namespace gdiff {

ComplexField ComplexField::zeros(std::size_t rows, std::size_t cols) {
    ComplexField f;
    f.rows = rows;
    f.cols = cols;
    f.data.assign(rows * cols, cplx{0.0, 0.0});
    return f;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey on a strided view; sign = -1 forward.
void fft_pow2(cplx* v, std::size_t n, std::size_t stride, double sign) {
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i * stride], v[j * stride]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double angle = sign * kTwoPi / static_cast<double>(len);
        cplx w_len{std::cos(angle), std::sin(angle)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx a = v[(i + k) * stride];
                cplx b = v[(i + k + len / 2) * stride] * w;
                v[(i + k) * stride] = a + b;
                v[(i + k + len / 2) * stride] = a - b;
                w *= w_len;
            }
        }
    }
}

void dft_direct(cplx* v, std::size_t n, std::size_t stride, double sign) {
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            double angle = sign * kTwoPi * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
            out[k] += v[j * stride] * cplx{std::cos(angle), std::sin(angle)};
        }
    }
    for (std::size_t k = 0; k < n; ++k) v[k * stride] = out[k];
}

void transform_1d(cplx* v, std::size_t n, std::size_t stride, double sign) {
    if (n == 1) return;
    if (is_pow2(n)) {
        fft_pow2(v, n, stride, sign);
    } else {
        dft_direct(v, n, stride, sign);
    }
}

}  // namespace

void dft2(ComplexField& field, bool inverse) {
    if (field.rows == 0 || field.cols == 0 ||
        field.data.size() != field.rows * field.cols) {
        throw DomainError("dft2: inconsistent field shape");
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t r = 0; r < field.rows; ++r) {
        transform_1d(field.data.data() + r * field.cols, field.cols, 1, sign);
    }
    for (std::size_t c = 0; c < field.cols; ++c) {
        transform_1d(field.data.data() + c, field.rows, field.cols, sign);
    }
    if (inverse) {
        double scale = 1.0 / (static_cast<double>(field.rows) *
                              static_cast<double>(field.cols));
        for (cplx& z : field.data) z *= scale;
    }
}

ComplexField dft2_of_real(const std::vector<double>& values, std::size_t rows,
                          std::size_t cols) {
    if (values.size() != rows * cols) {
        throw DomainError("dft2: value count does not match shape");
    }
    ComplexField f = ComplexField::zeros(rows, cols);
    for (std::size_t i = 0; i < values.size(); ++i) {
        f.data[i] = cplx{values[i], 0.0};
    }
    dft2(f, /*inverse=*/false);
    return f;
}

}  // namespace gdiff
