#pragma once
//
// kronsvd/problems.hpp: synthetic deblurring test problems. Blur uses zero
// boundary conditions; the shifted-delta example pins the orientation, and
// the operator agrees with the Toeplitz Kronecker construction.
//

#include "kronsvd/decompose.hpp"
#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/krylov.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kronsvd {

struct BlurProblem {
    Psf psf;
    DenseMatrix x_true;      // n x n
    std::vector<double> d;   // blur(x_true) + e, length n^2
    std::vector<double> e;   // noise realization
    double noise_level = 0.0;
    std::uint64_t seed = 0;
};

// out(i,j) = sum_{p,q} psf(p,q) * image(i - (p - cr), j - (q - cc)),
// out-of-range image values read as zero.
DenseMatrix blur_apply(const Psf& psf, const DenseMatrix& image);

// Adjoint of blur_apply (correlation with the flipped kernel).
DenseMatrix blur_apply_transpose(const Psf& psf, const DenseMatrix& image);

LinearOperator make_blur_operator(const Psf& psf, std::size_t n);

// len standard normals, Box-Muller over a seeded mt19937_64. Hand-rolled so
// the stream is identical across standard library implementations.
std::vector<double> gaussian_vector(std::size_t len, std::uint64_t seed);

// d = blur(x_true) + e with ||e|| = noise_level * ||blur(x_true)||,
// deterministic per seed.
BlurProblem make_problem(const Psf& psf, const DenseMatrix& x_true,
                         double noise_level, std::uint64_t seed);

// Procedural bright-object-on-black test image, values in [0,1], no RNG.
DenseMatrix make_satellite_image(std::size_t n);

// Single point at (size/2, size/2); identity blur.
Psf make_delta_psf(std::size_t size);

// Separable Gaussian, exact outer product of one 1-D profile, sum 1.
Psf make_gaussian_psf(std::size_t size, double sigma);

// Mixture of isotropic Gaussian blobs, sum 1. Each blob is separable, so
// the blur operator has small Kronecker rank and fast weight decay.
Psf make_speckle_psf(std::size_t size, std::uint64_t seed);

// Anti-aliased line segment, sum 1. Oblique motion gives slow Kronecker
// weight decay.
Psf make_motion_psf(std::size_t size, double length, double angle_deg);

} // namespace kronsvd
