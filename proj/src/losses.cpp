#include "semuq/losses.hpp"

#include "semuq/errors.hpp"

#include <cmath>

namespace semuq {

namespace {

inline double sgn_branch(double u) { return u >= 0.0 ? 1.0 : -1.0; }

inline double pinball_dq(double q, double z, double beta) {
    return z > q ? -beta : (1.0 - beta);
}

void check_train_inputs(const EncoderParams& params,
                        std::span<const Sample> batch, const DimMask& mask,
                        const TrainConfig& cfg) {
    if (batch.empty()) throw InvalidArgument("batch must be nonempty");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw InvalidArgument("alpha must lie in (0, 1)");
    if (cfg.recon_weight < 0.0)
        throw InvalidArgument("recon_weight must be nonnegative");
    int d = params.latent_dim();
    if (static_cast<int>(mask.size()) != d)
        throw InvalidArgument("mask length does not match latent dim");
    if (count_masked(mask) == 0)
        throw InvalidArgument("mask must select at least one dimension");
    for (const Sample& s : batch) {
        if (static_cast<int>(s.x.pixels.size()) != params.input_width())
            throw InvalidArgument("sample does not match encoder input width");
        if (static_cast<int>(s.z.size()) != d)
            throw InvalidArgument("sample latent does not match encoder dim");
    }
}

Eigen::MatrixXd batch_matrix(std::span<const Sample> batch) {
    Eigen::MatrixXd X(batch[0].x.pixels.size(), batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j)
        X.col(static_cast<Eigen::Index>(j)) = flatten(batch[j].x);
    return X;
}

struct ForwardTrace {
    std::vector<Eigen::MatrixXd> h;  // h[0] = X, h[l+1] = lrelu(a[l])
    std::vector<Eigen::MatrixXd> a;  // pre-activations
    BatchOutput out;
};

ForwardTrace forward_trace(const EncoderParams& params,
                           const Eigen::MatrixXd& X) {
    ForwardTrace t;
    // same input rescale as forward_batch; h[0] is the first layer's input
    t.h.push_back((kInputScale * X).array() + kInputShift);
    for (const DenseLayer& l : params.trunk) {
        Eigen::MatrixXd a = (l.W * t.h.back()).colwise() + l.b;
        t.a.push_back(a);
        t.h.push_back(a.unaryExpr(
            [](double v) { return v > 0.0 ? v : kLeakySlope * v; }));
    }
    const Eigen::MatrixXd& top = t.h.back();
    t.out.point = (params.head_point.W * top).colwise() + params.head_point.b;
    t.out.q_lo = (params.head_lo.W * top).colwise() + params.head_lo.b;
    t.out.q_hi = (params.head_hi.W * top).colwise() + params.head_hi.b;
    return t;
}

LatentVector column_latent(const Eigen::MatrixXd& m, Eigen::Index j) {
    return LatentVector(m.col(j).data(), m.col(j).data() + m.rows());
}

}  // namespace

double pinball_loss(double q, double z, double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("pinball level beta must lie in (0, 1)");
    return z > q ? (z - q) * beta : (q - z) * (1.0 - beta);
}

double point_loss(const LatentVector& pred, const LatentVector& z) {
    if (pred.size() != z.size())
        throw InvalidArgument("point_loss: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        sum += std::abs(pred[i] - z[i]);
    return sum;
}

double recon_loss(const ImageGrid& g_pred, const ImageGrid& g_true) {
    if (!g_pred.same_shape(g_true))
        throw InvalidArgument("recon_loss: shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < g_pred.pixels.size(); ++i)
        sum += std::abs(g_pred.pixels[i] - g_true.pixels[i]);
    return sum / static_cast<double>(g_pred.pixels.size());
}

bool LossComponents::finite() const {
    return std::isfinite(point) && std::isfinite(recon) &&
           std::isfinite(pinball_lo) && std::isfinite(pinball_hi);
}

LossComponents total_loss_components(const EncoderParams& params,
                                     std::span<const Sample> batch,
                                     const DimMask& mask,
                                     const TrainConfig& cfg) {
    check_train_inputs(params, batch, mask, cfg);
    Eigen::MatrixXd X = batch_matrix(batch);
    BatchOutput out = forward_batch(params, X);

    double beta_lo = cfg.alpha / 2.0;
    double beta_hi = 1.0 - cfg.alpha / 2.0;
    int d = params.latent_dim();

    LossComponents c;
    c.recon_weight = cfg.recon_weight;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        auto jj = static_cast<Eigen::Index>(j);
        const LatentVector& z = batch[j].z;
        for (int k = 0; k < d; ++k) {
            c.point += std::abs(out.point(k, jj) - z[k]);
            if (mask[k]) {
                c.pinball_lo += pinball_loss(out.q_lo(k, jj), z[k], beta_lo);
                c.pinball_hi += pinball_loss(out.q_hi(k, jj), z[k], beta_hi);
            }
        }
        if (cfg.recon_weight > 0.0) {
            ImageGrid pred = render(column_latent(out.point, jj),
                                    cfg.generator);
            ImageGrid truth = render(z, cfg.generator);
            c.recon += recon_loss(pred, truth);
        }
    }
    double inv = 1.0 / static_cast<double>(batch.size());
    c.point *= inv;
    c.recon *= inv;
    c.pinball_lo *= inv;
    c.pinball_hi *= inv;
    if (!c.finite())
        throw NumericalError("total_loss: non-finite loss value");
    return c;
}

double total_loss(const EncoderParams& params, std::span<const Sample> batch,
                  const DimMask& mask, const TrainConfig& cfg) {
    return total_loss_components(params, batch, mask, cfg).total();
}

GradResult loss_gradient(const EncoderParams& params,
                         std::span<const Sample> batch, const DimMask& mask,
                         const TrainConfig& cfg) {
    check_train_inputs(params, batch, mask, cfg);
    Eigen::MatrixXd X = batch_matrix(batch);
    ForwardTrace t = forward_trace(params, X);

    auto b = static_cast<Eigen::Index>(batch.size());
    int d = params.latent_dim();
    double inv_b = 1.0 / static_cast<double>(batch.size());
    double beta_lo = cfg.alpha / 2.0;
    double beta_hi = 1.0 - cfg.alpha / 2.0;

    LossComponents loss;
    loss.recon_weight = cfg.recon_weight;

    // Output-space gradients, already scaled by 1/B.
    Eigen::MatrixXd g_point = Eigen::MatrixXd::Zero(d, b);
    Eigen::MatrixXd g_lo = Eigen::MatrixXd::Zero(d, b);
    Eigen::MatrixXd g_hi = Eigen::MatrixXd::Zero(d, b);

    for (Eigen::Index j = 0; j < b; ++j) {
        const LatentVector& z = batch[static_cast<std::size_t>(j)].z;
        for (int k = 0; k < d; ++k) {
            double diff = t.out.point(k, j) - z[k];
            loss.point += std::abs(diff);
            g_point(k, j) = sgn_branch(diff) * inv_b;
            if (mask[k]) {
                loss.pinball_lo +=
                    pinball_loss(t.out.q_lo(k, j), z[k], beta_lo);
                loss.pinball_hi +=
                    pinball_loss(t.out.q_hi(k, j), z[k], beta_hi);
                g_lo(k, j) = pinball_dq(t.out.q_lo(k, j), z[k], beta_lo) * inv_b;
                g_hi(k, j) = pinball_dq(t.out.q_hi(k, j), z[k], beta_hi) * inv_b;
            }
        }
        if (cfg.recon_weight > 0.0) {
            LatentVector z_pred = column_latent(t.out.point, j);
            RenderWithJacobian pred = render_with_jacobian(z_pred,
                                                           cfg.generator);
            ImageGrid truth = render(z, cfg.generator);
            std::size_t npx = pred.image.pixels.size();
            double inv_px = 1.0 / static_cast<double>(npx);
            double abs_sum = 0.0;
            Eigen::VectorXd gr = Eigen::VectorXd::Zero(d);
            for (std::size_t p = 0; p < npx; ++p) {
                double dpx = pred.image.pixels[p] - truth.pixels[p];
                abs_sum += std::abs(dpx);
                double w = sgn_branch(dpx) * inv_px;
                const double* jrow = &pred.jacobian[p * kLatentDim];
                for (int k = 0; k < d; ++k) gr(k) += w * jrow[k];
            }
            loss.recon += abs_sum * inv_px;
            g_point.col(j) += cfg.recon_weight * inv_b * gr;
        }
    }
    loss.point *= inv_b;
    loss.recon *= inv_b;
    loss.pinball_lo *= inv_b;
    loss.pinball_hi *= inv_b;
    if (!loss.finite())
        throw NumericalError("loss_gradient: non-finite loss value");

    GradResult res;
    res.loss = loss;
    res.grad = zeros_like(params);

    const Eigen::MatrixXd& top = t.h.back();
    res.grad.head_point.W = g_point * top.transpose();
    res.grad.head_point.b = g_point.rowwise().sum();
    res.grad.head_lo.W = g_lo * top.transpose();
    res.grad.head_lo.b = g_lo.rowwise().sum();
    res.grad.head_hi.W = g_hi * top.transpose();
    res.grad.head_hi.b = g_hi.rowwise().sum();

    Eigen::MatrixXd dh = params.head_point.W.transpose() * g_point +
                         params.head_lo.W.transpose() * g_lo +
                         params.head_hi.W.transpose() * g_hi;
    for (int l = static_cast<int>(params.trunk.size()) - 1; l >= 0; --l) {
        Eigen::MatrixXd da =
            dh.array() *
            t.a[static_cast<std::size_t>(l)].unaryExpr([](double v) {
                return v > 0.0 ? 1.0 : kLeakySlope;
            }).array();
        res.grad.trunk[static_cast<std::size_t>(l)].W =
            da * t.h[static_cast<std::size_t>(l)].transpose();
        res.grad.trunk[static_cast<std::size_t>(l)].b = da.rowwise().sum();
        if (l > 0) dh = params.trunk[static_cast<std::size_t>(l)].W.transpose() * da;
    }
    if (!all_finite(res.grad))
        throw NumericalError("loss_gradient: non-finite gradient");
    return res;
}

}  // namespace semuq
