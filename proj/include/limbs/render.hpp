#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "limbs/parameter.hpp"

namespace limbs {

/// What to rasterize: a parameter plane or a dynamical plane.
struct PlaneTarget {
    enum class Kind { mandelbrot, locus, monic, julia, julia_family };
    Kind kind = Kind::mandelbrot;
    int q = 0;
    Complex param{0.0, 0.0}; // c for julia, lambda for julia_family
};

struct PlaneSpec {
    PlaneTarget target;
    double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
    int width = 256, height = 256;
    int max_iter = 256;
    std::vector<Angle> overlays; // external rays of the same plane
};

/// Row-major scalar grid; -1 marks interior pixels, otherwise the escape
/// count. Rays burn as overlay marks on top.
struct ImageGrid {
    int width = 0, height = 0;
    std::vector<double> pixels;
    std::vector<std::uint8_t> overlay_mask;

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

/// Pixel-center coordinate. Centered form: for a symmetric range the k-th
/// and mirror pixels are exact IEEE negations, so conjugation symmetry is
/// bit-exact.
inline double pixel_coord(double lo, double hi, int n, int k) {
    double center = (lo + hi) / 2.0;
    double step = (hi - lo) / n;
    return (k + 0.5 - n / 2.0) * step + center;
}

inline int escape_count(const PlaneTarget& t, Complex point, int max_iter) {
    switch (t.kind) {
        case PlaneTarget::Kind::mandelbrot:
        case PlaneTarget::Kind::locus:
        case PlaneTarget::Kind::monic: {
            ParameterSpace space = t.kind == PlaneTarget::Kind::mandelbrot
                                       ? ParameterSpace::mandelbrot()
                                       : (t.kind == PlaneTarget::Kind::locus
                                              ? ParameterSpace::locus(t.q)
                                              : ParameterSpace::monic_locus(t.q));
            Membership m = membership(space, point, max_iter);
            return m.inside ? -1 : m.iterations;
        }
        case PlaneTarget::Kind::julia:
        case PlaneTarget::Kind::julia_family: {
            DynamicalSystem sys = t.kind == PlaneTarget::Kind::julia
                                      ? DynamicalSystem::quadratic(t.param)
                                      : DynamicalSystem::family(t.q, t.param);
            const double radius = sys.escape_radius();
            Complex z = point;
            for (int n = 0; n < max_iter; ++n) {
                if (std::abs(z) > radius) return n;
                z = sys.apply(z);
            }
            return -1;
        }
    }
    return -1;
}

} // namespace detail

/// Escape-time rasterization with optional external-ray overlays.
/// Deterministic; rows are independent and rendered in parallel.
inline ImageGrid render_plane(const PlaneSpec& spec) {
    check(spec.width >= 1 && spec.height >= 1, "BadArgument", "empty image");
    check(spec.re_min < spec.re_max && spec.im_min < spec.im_max, "BadArgument", "empty bounds");

    ImageGrid grid;
    grid.width = spec.width;
    grid.height = spec.height;
    grid.pixels.assign(static_cast<std::size_t>(spec.width) * spec.height, 0.0);
    grid.overlay_mask.assign(grid.pixels.size(), 0);

    auto render_row = [&](int y) {
        double im = detail::pixel_coord(spec.im_min, spec.im_max, spec.height, y);
        for (int x = 0; x < spec.width; ++x) {
            double re = detail::pixel_coord(spec.re_min, spec.re_max, spec.width, x);
            grid.at(x, y) = detail::escape_count(spec.target, {re, im}, spec.max_iter);
        }
    };

    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw <= 1 || spec.height < 8) {
        for (int y = 0; y < spec.height; ++y) render_row(y);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned i = 0; i < hw; ++i)
            pool.emplace_back([&] {
                for (int y = next.fetch_add(1); y < spec.height; y = next.fetch_add(1))
                    render_row(y);
            });
        for (auto& th : pool) th.join();
    }

    // Ray overlays: rasterize the traced polyline.
    for (const Angle& theta : spec.overlays) {
        RayTrace ray;
        switch (spec.target.kind) {
            case PlaneTarget::Kind::mandelbrot:
                ray = trace_param_ray(ParameterSpace::mandelbrot(), theta, 1e-6);
                break;
            case PlaneTarget::Kind::locus:
                ray = trace_param_ray(ParameterSpace::locus(spec.target.q), theta, 1e-6);
                break;
            case PlaneTarget::Kind::monic:
                ray = trace_param_ray(ParameterSpace::monic_locus(spec.target.q), theta, 1e-6);
                break;
            case PlaneTarget::Kind::julia:
                ray = trace_dyn_ray(DynamicalSystem::quadratic(spec.target.param), theta);
                break;
            case PlaneTarget::Kind::julia_family:
                ray = trace_dyn_ray(DynamicalSystem::family(spec.target.q, spec.target.param),
                                    theta);
                break;
        }
        double step_re = (spec.re_max - spec.re_min) / spec.width;
        double step_im = (spec.im_max - spec.im_min) / spec.height;
        auto outside = [&](Complex a, Complex b) {
            // bounding-box rejection; the far field of a ray is huge
            return (a.real() < spec.re_min && b.real() < spec.re_min) ||
                   (a.real() >= spec.re_max && b.real() >= spec.re_max) ||
                   (a.imag() < spec.im_min && b.imag() < spec.im_min) ||
                   (a.imag() >= spec.im_max && b.imag() >= spec.im_max);
        };
        for (std::size_t i = 0; i + 1 < ray.samples.size(); ++i) {
            Complex a = ray.samples[i].point, b = ray.samples[i + 1].point;
            if (outside(a, b)) continue;
            double seg = std::abs(b - a);
            int pieces = static_cast<int>(seg / std::min(step_re, step_im)) + 1;
            pieces = std::clamp(pieces, 1, 4 * (spec.width + spec.height));
            for (int j = 0; j <= pieces; ++j) {
                Complex p = a + (b - a) * (double(j) / pieces);
                int x = static_cast<int>(std::floor((p.real() - spec.re_min) / step_re));
                int y = static_cast<int>(std::floor((p.imag() - spec.im_min) / step_im));
                if (x >= 0 && x < spec.width && y >= 0 && y < spec.height)
                    grid.overlay_mask[static_cast<std::size_t>(y) * spec.width + x] = 1;
            }
        }
    }
    return grid;
}

/// Bit-exact binary PGM: interior black, escape counts log-scaled into
/// 1..254, overlays at 255. Rows are written top-down (max imaginary first).
inline std::vector<std::uint8_t> to_pgm_bytes(const ImageGrid& grid, int max_iter) {
    std::string header = "P5\n" + std::to_string(grid.width) + " " +
                         std::to_string(grid.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    double denom = std::log1p(static_cast<double>(std::max(1, max_iter)));
    for (int y = grid.height - 1; y >= 0; --y)
        for (int x = 0; x < grid.width; ++x) {
            std::size_t idx = static_cast<std::size_t>(y) * grid.width + x;
            std::uint8_t v = 0;
            if (grid.overlay_mask[idx]) {
                v = 255;
            } else if (grid.pixels[idx] >= 0) {
                double s = std::log1p(grid.pixels[idx]) / denom;
                v = static_cast<std::uint8_t>(
                    std::clamp(1.0 + 253.0 * s, 1.0, 254.0));
            }
            out.push_back(v);
        }
    return out;
}

inline void write_pgm(const ImageGrid& grid, int max_iter, const std::string& path) {
    auto bytes = to_pgm_bytes(grid, max_iter);
    std::ofstream f(path, std::ios::binary);
    check(f.good(), "IoError", "cannot open " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
    check(f.good(), "IoError", "write failed for " + path);
}

} // namespace limbs
