#include "semuq/visualize.hpp"

#include "semuq/errors.hpp"
#include "semuq/pgm.hpp"
#include "semuq/text_io.hpp"

namespace semuq {

LatentVector endpoint_latent(const EncoderOutput& out, double lambda_hat,
                             int d, Endpoint which) {
    if (d < 0 || d >= static_cast<int>(out.point.size()))
        throw InvalidArgument("endpoint_latent: dimension out of range");
    IntervalSet iv = interval_at(out, lambda_hat);
    LatentVector z = out.point;
    z[static_cast<std::size_t>(d)] = which == Endpoint::Lower
                                         ? iv.lo[static_cast<std::size_t>(d)]
                                         : iv.hi[static_cast<std::size_t>(d)];
    return z;
}

std::vector<PanelEntry> render_panel(const EncoderParams& params,
                                     double lambda_hat, const ImageGrid& x,
                                     const std::vector<int>& dims,
                                     const DimMask& mask,
                                     const std::filesystem::path& out_dir,
                                     const GeneratorSpec& g) {
    for (int d : dims) {
        if (d < 0 || d >= static_cast<int>(mask.size()) ||
            !mask[static_cast<std::size_t>(d)])
            throw InvalidArgument(
                "render_panel: dim " + std::to_string(d) +
                " is not a masked (relevant) dimension");
    }
    std::filesystem::create_directories(out_dir);

    EncoderOutput out = forward(params, x);
    std::vector<PanelEntry> entries;

    write_pgm(out_dir / "input.pgm", x, 0);
    entries.push_back({-1, "input", "input.pgm", 0.0});
    if (x.channels > 1) {
        write_pgm(out_dir / "input_mask.pgm", x, x.channels - 1);
        entries.push_back({-1, "input_mask", "input_mask.pgm", 0.0});
    }
    write_pgm(out_dir / "point.pgm", render(out.point, g), 0);
    entries.push_back({-1, "point", "point.pgm", 0.0});

    for (int d : dims) {
        for (Endpoint which : {Endpoint::Lower, Endpoint::Upper}) {
            LatentVector z = endpoint_latent(out, lambda_hat, d, which);
            std::string tag = which == Endpoint::Lower ? "lower" : "upper";
            std::string file = "dim" + std::to_string(d) + "_" + tag + ".pgm";
            write_pgm(out_dir / file, render(z, g), 0);
            entries.push_back(
                {d, tag, file, z[static_cast<std::size_t>(d)]});
        }
    }

    std::string csv = "dim,which,file,latent_value\n";
    for (const PanelEntry& e : entries)
        csv += fmt_int(e.dim) + "," + e.which + "," + e.file + "," +
               fmt_double(e.latent_value) + "\n";
    write_text_file(out_dir / "manifest.csv", csv);
    return entries;
}

void export_interval_plot_data(const std::filesystem::path& csv_file,
                               const EncoderOutput& out, double lambda_hat,
                               const LatentVector& z_true,
                               const DimMask& mask) {
    std::size_t d = out.point.size();
    if (z_true.size() != d || mask.size() != d)
        throw InvalidArgument("export_interval_plot_data: length mismatch");
    IntervalSet cal = interval_at(out, lambda_hat);
    std::string csv = "dim,f,q_lo,q_hi,q_cal_lo,q_cal_hi,z_true,covered\n";
    for (std::size_t k = 0; k < d; ++k) {
        if (!mask[k]) continue;
        bool covered = z_true[k] >= cal.lo[k] && z_true[k] <= cal.hi[k];
        csv += fmt_int(static_cast<int64_t>(k)) + "," +
               fmt_double(out.point[k]) + "," + fmt_double(out.q_lo[k]) + "," +
               fmt_double(out.q_hi[k]) + "," + fmt_double(cal.lo[k]) + "," +
               fmt_double(cal.hi[k]) + "," + fmt_double(z_true[k]) + "," +
               (covered ? "1" : "0") + "\n";
    }
    write_text_file(csv_file, csv);
}

}  // namespace semuq
