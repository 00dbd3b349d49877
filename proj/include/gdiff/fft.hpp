#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gdiff {

using cplx = std::complex<double>;

// Row-major complex field of size rows x cols.
struct ComplexField {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    static ComplexField zeros(std::size_t rows, std::size_t cols);
    cplx& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    cplx at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// In-place 2D DFT under the convention
//   fwd(xi1, xi2) = sum_x v(x) exp(-2 pi i x1 xi1 / M) exp(-2 pi i x2 xi2 / N)
// and inverse with the opposite sign carrying the 1/(MN) factor, so
// inverse(forward(v)) = v. Power-of-two lengths run radix-2; other lengths
// use the direct O(n^2) transform (fine at desk scale).
void dft2(ComplexField& field, bool inverse);

ComplexField dft2_of_real(const std::vector<double>& values, std::size_t rows,
                          std::size_t cols);

}  // namespace gdiff
