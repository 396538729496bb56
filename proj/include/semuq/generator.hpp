#pragma once

#include "semuq/image.hpp"

#include <vector>

namespace semuq {

// Deterministic disentangled generator: a soft-edged disc over a striped
// flat background. Each latent coordinate controls exactly one visual
// factor; raw coordinates are squashed through a sigmoid into the factor's
// valid range, so any real-valued latent renders to a legal image.

inline constexpr int kLatentDim = 8;

enum Factor : int {
    kCenterX = 0,
    kCenterY = 1,
    kRadius = 2,
    kDiscIntensity = 3,
    kBackgroundIntensity = 4,
    kEdgeSoftness = 5,
    kStripePhase = 6,
    kStripeContrast = 7,
};

struct GeneratorSpec {
    int height = 32;
    int width = 32;
};

/// Physical factor values after squashing. Centers, radius, and softness
/// are in pixel units; intensities in [0, 1]; phase in radians.
struct RenderFactors {
    double center_x = 0;
    double center_y = 0;
    double radius = 0;
    double disc_intensity = 0;
    double background_intensity = 0;
    double edge_softness = 0;
    double stripe_phase = 0;
    double stripe_contrast = 0;
};

struct FactorRange {
    double lo;
    double hi;
};

/// Normalized range of a factor before pixel scaling (centers and radius
/// are fractions of the image extent).
FactorRange factor_range(Factor f);

double sigmoid(double x);

RenderFactors factors_from_latent(const LatentVector& z,
                                  const GeneratorSpec& g = {});

/// Pure render; same z gives bit-identical pixels. Output is H x W x 1.
ImageGrid render(const LatentVector& z, const GeneratorSpec& g = {});

/// Render plus d(pixel)/d(raw latent), row-major (pixel, dim). The image
/// is C1 in the latent (smoothstep disc edge), so the Jacobian is exact
/// away from the degenerate dist == 0 point.
struct RenderWithJacobian {
    ImageGrid image;
    std::vector<double> jacobian;  // (height*width) x kLatentDim
};

RenderWithJacobian render_with_jacobian(const LatentVector& z,
                                        const GeneratorSpec& g = {});

}  // namespace semuq
