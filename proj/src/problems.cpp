//
// Zero-boundary blur, seeded noise, and procedural images and kernels.
//

#include "kronsvd/problems.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

namespace kronsvd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform draw on (0, 1], 53-bit resolution.
double unit_open(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

double vnorm(const std::vector<double>& v) {
    return std::sqrt(kernels::ops().dot(v.data(), v.data(), v.size()));
}

// sign = +1 applies the blur, sign = -1 its adjoint.
DenseMatrix correlate(const Psf& psf, const DenseMatrix& image, int sign) {
    if (image.rows() != image.cols())
        throw DimensionError("blur_apply: image must be square");
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(image.rows());
    const std::ptrdiff_t mr = static_cast<std::ptrdiff_t>(psf.array.rows());
    const std::ptrdiff_t mc = static_cast<std::ptrdiff_t>(psf.array.cols());
    const std::ptrdiff_t cr = static_cast<std::ptrdiff_t>(psf.center_row);
    const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(psf.center_col);
    DenseMatrix out(image.rows(), image.cols());
    for (std::ptrdiff_t q = 0; q < mc; ++q) {
        for (std::ptrdiff_t p = 0; p < mr; ++p) {
            const double w = psf.array(static_cast<std::size_t>(p),
                                       static_cast<std::size_t>(q));
            if (w == 0.0) continue;
            const std::ptrdiff_t dp = sign * (p - cr);
            const std::ptrdiff_t dq = sign * (q - cc);
            const std::ptrdiff_t si_lo = std::max<std::ptrdiff_t>(0, -dp);
            const std::ptrdiff_t si_hi = std::min<std::ptrdiff_t>(n, n - dp);
            const std::ptrdiff_t sj_lo = std::max<std::ptrdiff_t>(0, -dq);
            const std::ptrdiff_t sj_hi = std::min<std::ptrdiff_t>(n, n - dq);
            for (std::ptrdiff_t sj = sj_lo; sj < sj_hi; ++sj)
                for (std::ptrdiff_t si = si_lo; si < si_hi; ++si)
                    out(static_cast<std::size_t>(si + dp),
                        static_cast<std::size_t>(sj + dq)) +=
                        w * image(static_cast<std::size_t>(si),
                                  static_cast<std::size_t>(sj));
        }
    }
    return out;
}

void normalize_sum(DenseMatrix& arr) {
    double total = 0.0;
    for (double v : arr.values()) total += v;
    if (total <= 0.0) throw NumericError("psf generator: zero mass");
    kernels::ops().scal(arr.data(), 1.0 / total, arr.size());
}

// Linear one-pixel edge ramp; signed_dist > 0 means inside.
double aa(double signed_dist) {
    return std::clamp(signed_dist + 0.5, 0.0, 1.0);
}

} // namespace

DenseMatrix blur_apply(const Psf& psf, const DenseMatrix& image) {
    return correlate(psf, image, +1);
}

DenseMatrix blur_apply_transpose(const Psf& psf, const DenseMatrix& image) {
    return correlate(psf, image, -1);
}

LinearOperator make_blur_operator(const Psf& psf, std::size_t n) {
    if (n == 0) throw DimensionError("make_blur_operator: n must be positive");
    auto hold = std::make_shared<const Psf>(psf);
    LinearOperator op;
    op.dim = n * n;
    op.apply = [hold, n](const std::vector<double>& v) {
        return vec(blur_apply(*hold, unvec(v, n)));
    };
    op.apply_transpose = [hold, n](const std::vector<double>& v) {
        return vec(blur_apply_transpose(*hold, unvec(v, n)));
    };
    return op;
}

std::vector<double> gaussian_vector(std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; i += 2) {
        const double u1 = unit_open(rng);
        const double u2 = unit_open(rng);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        out[i] = radius * std::cos(angle);
        if (i + 1 < len) out[i + 1] = radius * std::sin(angle);
    }
    return out;
}

BlurProblem make_problem(const Psf& psf, const DenseMatrix& x_true,
                         double noise_level, std::uint64_t seed) {
    if (noise_level < 0.0) throw Error("make_problem: noise_level must be >= 0");
    BlurProblem prob;
    prob.psf = psf;
    prob.x_true = x_true;
    prob.noise_level = noise_level;
    prob.seed = seed;

    prob.d = vec(blur_apply(psf, x_true));
    prob.e.assign(prob.d.size(), 0.0);
    if (noise_level > 0.0) {
        const std::vector<double> raw = gaussian_vector(prob.d.size(), seed);
        const double raw_norm = vnorm(raw);
        const double data_norm = vnorm(prob.d);
        if (raw_norm > 0.0 && data_norm > 0.0) {
            const double scale = noise_level * data_norm / raw_norm;
            for (std::size_t i = 0; i < raw.size(); ++i)
                prob.e[i] = scale * raw[i];
        }
    }
    kernels::ops().axpy(prob.d.data(), 1.0, prob.e.data(), prob.d.size());
    return prob;
}

DenseMatrix make_satellite_image(std::size_t n) {
    if (n < 8)
        throw DimensionError("make_satellite_image: n must be at least 8");
    DenseMatrix img(n, n);
    const double s = static_cast<double>(n);
    const double c = 0.5 * (s - 1.0);
    const double body_r = 0.16 * s;
    const double ca = std::cos(kPi / 6.0);
    const double sa = std::sin(kPi / 6.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = static_cast<double>(i) - c;
            const double x = static_cast<double>(j) - c;
            const double u = x * ca + y * sa;
            const double v = -x * sa + y * ca;

            const double body = aa(body_r - std::hypot(x, y));
            const double panel =
                0.75 * aa(std::min({0.44 * s - std::abs(u),
                                    std::abs(u) - 0.20 * s,
                                    0.09 * s - std::abs(v)}));
            const double arm =
                0.9 * aa(std::min({0.32 * s - v, v - 0.10 * s,
                                   0.04 * s - std::abs(u)}));
            img(i, j) = std::max({body, panel, arm});
        }
    }
    return img;
}

Psf make_delta_psf(std::size_t size) {
    if (size == 0) throw DimensionError("make_delta_psf: size must be positive");
    DenseMatrix arr(size, size);
    arr(size / 2, size / 2) = 1.0;
    return make_psf(std::move(arr), size / 2, size / 2);
}

Psf make_gaussian_psf(std::size_t size, double sigma) {
    if (size == 0)
        throw DimensionError("make_gaussian_psf: size must be positive");
    if (!(sigma > 0.0)) throw Error("make_gaussian_psf: sigma must be > 0");
    const std::size_t c = size / 2;
    std::vector<double> profile(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double t = static_cast<double>(i) - static_cast<double>(c);
        profile[i] = std::exp(-t * t / (2.0 * sigma * sigma));
    }
    DenseMatrix arr(size, size);
    for (std::size_t j = 0; j < size; ++j)
        for (std::size_t i = 0; i < size; ++i)
            arr(i, j) = profile[i] * profile[j];
    normalize_sum(arr);
    return make_psf(std::move(arr), c, c);
}

Psf make_speckle_psf(std::size_t size, std::uint64_t seed) {
    if (size < 4)
        throw DimensionError("make_speckle_psf: size must be at least 4");
    std::mt19937_64 rng(seed);
    const double s = static_cast<double>(size);
    DenseMatrix arr(size, size);
    double strength = 1.0;
    for (int blob = 0; blob < 6; ++blob) {
        const double cy = (0.35 + 0.3 * unit_open(rng)) * (s - 1.0);
        const double cx = (0.35 + 0.3 * unit_open(rng)) * (s - 1.0);
        const double sig = (0.03 + 0.04 * unit_open(rng)) * s;
        const double amp = (0.55 + 0.45 * unit_open(rng)) * strength;
        strength *= 0.38;
        const double inv2 = 1.0 / (2.0 * sig * sig);
        for (std::size_t j = 0; j < size; ++j)
            for (std::size_t i = 0; i < size; ++i) {
                const double dy = static_cast<double>(i) - cy;
                const double dx = static_cast<double>(j) - cx;
                arr(i, j) += amp * std::exp(-(dy * dy + dx * dx) * inv2);
            }
    }
    normalize_sum(arr);
    return make_psf(std::move(arr), size / 2, size / 2);
}

Psf make_motion_psf(std::size_t size, double length, double angle_deg) {
    if (size < 3)
        throw DimensionError("make_motion_psf: size must be at least 3");
    if (!(length >= 1.0) || length > static_cast<double>(size))
        throw Error("make_motion_psf: length must be in [1, size]");
    const double ci = static_cast<double>(size / 2);
    const double cj = static_cast<double>(size / 2);
    const double theta = angle_deg * kPi / 180.0;
    const double di = std::sin(theta);
    const double dj = std::cos(theta);
    const double half = 0.5 * length;
    DenseMatrix arr(size, size);
    for (std::size_t j = 0; j < size; ++j)
        for (std::size_t i = 0; i < size; ++i) {
            const double wi = static_cast<double>(i) - ci;
            const double wj = static_cast<double>(j) - cj;
            const double t = std::clamp(wi * di + wj * dj, -half, half);
            const double dist = std::hypot(wi - t * di, wj - t * dj);
            arr(i, j) = std::max(0.0, 1.0 - dist);
        }
    normalize_sum(arr);
    return make_psf(std::move(arr), size / 2, size / 2);
}

} // namespace kronsvd
