#include "semuq/train.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <numeric>

namespace semuq {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, RngStream& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = rng.uniform_index(static_cast<uint32_t>(i));
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

TrainResult train(const std::vector<Sample>& train_split, const DimMask& mask,
                  const TrainConfig& cfg,
                  const std::vector<int>& trunk_widths) {
    if (train_split.empty())
        throw InvalidArgument("train: training split is empty");
    if (cfg.epochs < 0) throw InvalidArgument("train: epochs must be >= 0");
    if (cfg.batch_size < 1)
        throw InvalidArgument("train: batch size must be positive");
    if (!(cfg.learning_rate > 0.0))
        throw InvalidArgument("train: learning rate must be positive");

    int input_width = static_cast<int>(train_split[0].x.pixels.size());
    RngStream init_rng(derive_seed(cfg.seed, "train/init"));
    TrainResult res;
    res.params = make_encoder(input_width, trunk_widths, kLatentDim, init_rng);

    std::vector<std::size_t> idx(train_split.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<Sample> batch;
    uint64_t shuffle_base = derive_seed(cfg.seed, "train/shuffle");

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        RngStream shuffle_rng(
            derive_seed(shuffle_base, static_cast<uint64_t>(epoch)));
        shuffle_indices(idx, shuffle_rng);

        EpochTrace et;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < idx.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t end = std::min(
                idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t i = start; i < end; ++i)
                batch.push_back(train_split[idx[i]]);

            GradResult g;
            try {
                g = loss_gradient(res.params, batch, mask, cfg);
            } catch (const NumericalError&) {
                throw TrainingFailure(
                    "training diverged at epoch " + std::to_string(epoch),
                    epoch);
            }
            axpy(res.params, -cfg.learning_rate, g.grad);

            double w = static_cast<double>(end - start);
            et.point += g.loss.point * w;
            et.pinball_lo += g.loss.pinball_lo * w;
            et.pinball_hi += g.loss.pinball_hi * w;
            et.recon += g.loss.recon * w;
            seen += end - start;
        }
        double inv = 1.0 / static_cast<double>(seen);
        et.point *= inv;
        et.pinball_lo *= inv;
        et.pinball_hi *= inv;
        et.recon *= inv;
        res.trace.push_back(et);

        if (!all_finite(res.params))
            throw TrainingFailure(
                "parameters became non-finite at epoch " +
                    std::to_string(epoch),
                epoch);
    }
    return res;
}

void save_trace(const std::filesystem::path& file,
                const std::vector<EpochTrace>& trace) {
    std::string csv = "epoch,point_loss,pinball_lo,pinball_hi,recon\n";
    for (std::size_t e = 0; e < trace.size(); ++e) {
        csv += fmt_int(static_cast<int64_t>(e)) + "," +
               fmt_double(trace[e].point) + "," +
               fmt_double(trace[e].pinball_lo) + "," +
               fmt_double(trace[e].pinball_hi) + "," +
               fmt_double(trace[e].recon) + "\n";
    }
    write_text_file(file, csv);
}

}  // namespace semuq
