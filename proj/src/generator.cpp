#include "semuq/generator.hpp"

#include "semuq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semuq {

namespace {

constexpr double kStripeCycles = 3.0;

// Normalized factor ranges. Background tops out at 0.30 + 0.15 = 0.45 with
// full stripe contrast, and the disc starts at 0.55, so disc and background
// never overlap in intensity.
constexpr FactorRange kRanges[kLatentDim] = {
    {0.20, 0.80},                    // center x, fraction of width
    {0.20, 0.80},                    // center y, fraction of height
    {0.06, 0.38},                    // radius, fraction of min extent
    {0.55, 1.00},                    // disc intensity
    {0.05, 0.30},                    // background base intensity
    {0.50, 3.00},                    // edge softness, pixels
    {0.0, 2.0 * std::numbers::pi},   // stripe phase
    {0.00, 0.15},                    // stripe contrast
};

void check_latent(const LatentVector& z) {
    if (static_cast<int>(z.size()) != kLatentDim)
        throw InvalidArgument("latent dimension mismatch: expected " +
                              std::to_string(kLatentDim) + ", got " +
                              std::to_string(z.size()));
    for (double v : z)
        if (!std::isfinite(v))
            throw InvalidArgument("latent coordinate is not finite");
}

double squash(double z, Factor f) {
    const FactorRange& r = kRanges[f];
    return r.lo + (r.hi - r.lo) * sigmoid(z);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct PixelGeometry {
    double t;        // clamped smoothstep argument
    double m;        // disc membership in [0, 1]
    double dist;     // distance to the disc center
    double interior; // 1 when the edge ramp is active at this pixel
    double dx, dy;
};

PixelGeometry pixel_geometry(int i, int j, const RenderFactors& f) {
    PixelGeometry p;
    p.dx = (j + 0.5) - f.center_x;
    p.dy = (i + 0.5) - f.center_y;
    p.dist = std::sqrt(p.dx * p.dx + p.dy * p.dy);
    double t_raw = 0.5 + (f.radius - p.dist) / (2.0 * f.edge_softness);
    p.interior = (t_raw > 0.0 && t_raw < 1.0) ? 1.0 : 0.0;
    p.t = clamp01(t_raw);
    p.m = p.t * p.t * (3.0 - 2.0 * p.t);
    return p;
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

FactorRange factor_range(Factor f) { return kRanges[f]; }

RenderFactors factors_from_latent(const LatentVector& z,
                                  const GeneratorSpec& g) {
    check_latent(z);
    double extent = std::min(g.height, g.width);
    RenderFactors f;
    f.center_x = squash(z[kCenterX], kCenterX) * g.width;
    f.center_y = squash(z[kCenterY], kCenterY) * g.height;
    f.radius = squash(z[kRadius], kRadius) * extent;
    f.disc_intensity = squash(z[kDiscIntensity], kDiscIntensity);
    f.background_intensity =
        squash(z[kBackgroundIntensity], kBackgroundIntensity);
    f.edge_softness = squash(z[kEdgeSoftness], kEdgeSoftness);
    f.stripe_phase = squash(z[kStripePhase], kStripePhase);
    f.stripe_contrast = squash(z[kStripeContrast], kStripeContrast);
    return f;
}

ImageGrid render(const LatentVector& z, const GeneratorSpec& g) {
    RenderFactors f = factors_from_latent(z, g);
    ImageGrid img = ImageGrid::zeros(g.height, g.width, 1);
    double omega = 2.0 * std::numbers::pi * kStripeCycles / g.height;
    for (int i = 0; i < g.height; ++i) {
        double theta = omega * (i + 0.5) + f.stripe_phase;
        double bg = f.background_intensity +
                    f.stripe_contrast * (0.5 + 0.5 * std::sin(theta));
        for (int j = 0; j < g.width; ++j) {
            PixelGeometry p = pixel_geometry(i, j, f);
            img.at(i, j, 0) = clamp01(bg + (f.disc_intensity - bg) * p.m);
        }
    }
    return img;
}

RenderWithJacobian render_with_jacobian(const LatentVector& z,
                                        const GeneratorSpec& g) {
    RenderFactors f = factors_from_latent(z, g);
    double extent = std::min(g.height, g.width);

    // d(physical factor) / d(raw coordinate): range width times the
    // sigmoid slope, times the pixel scale where one applies.
    double dfdz[kLatentDim];
    double scale[kLatentDim] = {static_cast<double>(g.width),
                                static_cast<double>(g.height),
                                extent, 1.0, 1.0, 1.0, 1.0, 1.0};
    for (int k = 0; k < kLatentDim; ++k) {
        double s = sigmoid(z[k]);
        auto fk = static_cast<Factor>(k);
        dfdz[k] = (kRanges[fk].hi - kRanges[fk].lo) * s * (1.0 - s) * scale[k];
    }

    RenderWithJacobian out;
    out.image = ImageGrid::zeros(g.height, g.width, 1);
    out.jacobian.assign(
        static_cast<std::size_t>(g.height) * g.width * kLatentDim, 0.0);

    double omega = 2.0 * std::numbers::pi * kStripeCycles / g.height;
    for (int i = 0; i < g.height; ++i) {
        double theta = omega * (i + 0.5) + f.stripe_phase;
        double wave = 0.5 + 0.5 * std::sin(theta);
        double bg = f.background_intensity + f.stripe_contrast * wave;
        for (int j = 0; j < g.width; ++j) {
            PixelGeometry p = pixel_geometry(i, j, f);
            double contrast = f.disc_intensity - bg;
            out.image.at(i, j, 0) = clamp01(bg + contrast * p.m);

            double* row =
                &out.jacobian[(static_cast<std::size_t>(i) * g.width + j) *
                              kLatentDim];
            // dm/d(t_raw), zero once the edge ramp saturates.
            double dm = 6.0 * p.t * (1.0 - p.t) * p.interior;
            double inv2s = 1.0 / (2.0 * f.edge_softness);
            double ddist_dcx = p.dist > 0.0 ? -p.dx / p.dist : 0.0;
            double ddist_dcy = p.dist > 0.0 ? -p.dy / p.dist : 0.0;

            row[kCenterX] = contrast * dm * (-inv2s) * ddist_dcx;
            row[kCenterY] = contrast * dm * (-inv2s) * ddist_dcy;
            row[kRadius] = contrast * dm * inv2s;
            row[kEdgeSoftness] = contrast * dm * (f.radius - p.dist) *
                                 (-2.0 * inv2s * inv2s);
            row[kDiscIntensity] = p.m;
            row[kBackgroundIntensity] = 1.0 - p.m;
            row[kStripeContrast] = (1.0 - p.m) * wave;
            row[kStripePhase] =
                (1.0 - p.m) * f.stripe_contrast * 0.5 * std::cos(theta);
            for (int k = 0; k < kLatentDim; ++k) row[k] *= dfdz[k];
        }
    }
    return out;
}

}  // namespace semuq
