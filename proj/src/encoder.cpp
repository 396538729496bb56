#include "semuq/encoder.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace semuq {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'Q', 'E', 'N', 'C', '\0', '\0'};
constexpr uint32_t kVersion = 1;

DenseLayer init_layer(int out, int in, RngStream& rng) {
    DenseLayer l;
    l.W.resize(out, in);
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (int i = 0; i < out; ++i)
        for (int j = 0; j < in; ++j)
            l.W(i, j) = bound * (2.0 * rng.uniform01() - 1.0);
    l.b = Eigen::VectorXd::Zero(out);
    return l;
}

inline double lrelu(double a) { return a > 0.0 ? a : kLeakySlope * a; }

void append_f32(std::vector<unsigned char>& bytes, float v) {
    uint32_t u = std::bit_cast<uint32_t>(v);
    for (int i = 0; i < 4; ++i) bytes.push_back((u >> (8 * i)) & 0xff);
}

void append_u32(std::vector<unsigned char>& bytes, uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
}

void append_layer(std::vector<unsigned char>& bytes, const DenseLayer& l) {
    for (int i = 0; i < l.W.rows(); ++i)
        for (int j = 0; j < l.W.cols(); ++j)
            append_f32(bytes, static_cast<float>(l.W(i, j)));
    for (int i = 0; i < l.b.size(); ++i)
        append_f32(bytes, static_cast<float>(l.b(i)));
}

struct Cursor {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;
    std::string path;

    uint32_t u32() {
        if (pos + 4 > bytes.size())
            throw IoError("truncated checkpoint: " + path);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
};

DenseLayer read_layer(Cursor& c, int out, int in) {
    DenseLayer l;
    l.W.resize(out, in);
    for (int i = 0; i < out; ++i)
        for (int j = 0; j < in; ++j) l.W(i, j) = c.f32();
    l.b.resize(out);
    for (int i = 0; i < out; ++i) l.b(i) = c.f32();
    return l;
}

}  // namespace

EncoderParams make_encoder(int input_width,
                           const std::vector<int>& trunk_widths,
                           int latent_dim, RngStream& rng) {
    if (input_width <= 0 || latent_dim <= 0)
        throw InvalidArgument("encoder dimensions must be positive");
    for (int w : trunk_widths)
        if (w <= 0) throw InvalidArgument("trunk widths must be positive");

    EncoderParams p;
    int in = input_width;
    for (int w : trunk_widths) {
        p.trunk.push_back(init_layer(w, in, rng));
        in = w;
    }
    p.head_point = init_layer(latent_dim, in, rng);
    p.head_lo = init_layer(latent_dim, in, rng);
    p.head_hi = init_layer(latent_dim, in, rng);
    return p;
}

Eigen::VectorXd flatten(const ImageGrid& x) {
    return Eigen::Map<const Eigen::VectorXd>(
        x.pixels.data(), static_cast<Eigen::Index>(x.pixels.size()));
}

EncoderOutput forward(const EncoderParams& params, const ImageGrid& x) {
    if (static_cast<int>(x.pixels.size()) != params.input_width())
        throw InvalidArgument(
            "encoder input width mismatch: expected " +
            std::to_string(params.input_width()) + " values, got " +
            std::to_string(x.pixels.size()));
    Eigen::MatrixXd X = flatten(x);
    BatchOutput out = forward_batch(params, X);
    EncoderOutput o;
    int d = params.latent_dim();
    o.point.assign(out.point.data(), out.point.data() + d);
    o.q_lo.assign(out.q_lo.data(), out.q_lo.data() + d);
    o.q_hi.assign(out.q_hi.data(), out.q_hi.data() + d);
    return o;
}

BatchOutput forward_batch(const EncoderParams& params,
                          const Eigen::MatrixXd& X) {
    if (X.rows() != params.input_width())
        throw InvalidArgument("encoder input width mismatch in batch");
    Eigen::MatrixXd h = (kInputScale * X).array() + kInputShift;
    for (const DenseLayer& l : params.trunk) {
        Eigen::MatrixXd a = (l.W * h).colwise() + l.b;
        h = a.unaryExpr([](double v) { return lrelu(v); });
    }
    BatchOutput out;
    out.point = (params.head_point.W * h).colwise() + params.head_point.b;
    out.q_lo = (params.head_lo.W * h).colwise() + params.head_lo.b;
    out.q_hi = (params.head_hi.W * h).colwise() + params.head_hi.b;
    return out;
}

EncoderParams zeros_like(const EncoderParams& p) {
    EncoderParams z = p;
    for (DenseLayer& l : z.trunk) {
        l.W.setZero();
        l.b.setZero();
    }
    for (DenseLayer* l : {&z.head_point, &z.head_lo, &z.head_hi}) {
        l->W.setZero();
        l->b.setZero();
    }
    return z;
}

void axpy(EncoderParams& y, double a, const EncoderParams& x) {
    if (y.trunk.size() != x.trunk.size())
        throw InvalidArgument("axpy: parameter shapes differ");
    for (std::size_t i = 0; i < y.trunk.size(); ++i) {
        y.trunk[i].W += a * x.trunk[i].W;
        y.trunk[i].b += a * x.trunk[i].b;
    }
    y.head_point.W += a * x.head_point.W;
    y.head_point.b += a * x.head_point.b;
    y.head_lo.W += a * x.head_lo.W;
    y.head_lo.b += a * x.head_lo.b;
    y.head_hi.W += a * x.head_hi.W;
    y.head_hi.b += a * x.head_hi.b;
}

bool all_finite(const EncoderParams& p) {
    auto ok = [](const DenseLayer& l) {
        return l.W.allFinite() && l.b.allFinite();
    };
    for (const DenseLayer& l : p.trunk)
        if (!ok(l)) return false;
    return ok(p.head_point) && ok(p.head_lo) && ok(p.head_hi);
}

void save_encoder(const std::filesystem::path& file, const EncoderParams& p) {
    std::vector<unsigned char> bytes;
    bytes.insert(bytes.end(), kMagic, kMagic + sizeof(kMagic));
    append_u32(bytes, kVersion);
    append_u32(bytes, static_cast<uint32_t>(p.input_width()));
    append_u32(bytes, static_cast<uint32_t>(p.latent_dim()));
    append_u32(bytes, static_cast<uint32_t>(p.trunk.size()));
    for (const DenseLayer& l : p.trunk) {
        append_u32(bytes, static_cast<uint32_t>(l.W.rows()));
        append_u32(bytes, static_cast<uint32_t>(l.W.cols()));
    }
    for (const DenseLayer& l : p.trunk) append_layer(bytes, l);
    append_layer(bytes, p.head_point);
    append_layer(bytes, p.head_lo);
    append_layer(bytes, p.head_hi);
    write_binary_file(file, bytes);
}

EncoderParams load_encoder(const std::filesystem::path& file) {
    std::vector<unsigned char> bytes = read_binary_file(file);
    if (bytes.size() < sizeof(kMagic) ||
        std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw IoError("not an encoder checkpoint (bad magic): " +
                      file.string());
    Cursor c{bytes, sizeof(kMagic), file.string()};
    uint32_t version = c.u32();
    if (version != kVersion)
        throw IoError("unsupported checkpoint version: " + file.string());
    int input_width = static_cast<int>(c.u32());
    int latent_dim = static_cast<int>(c.u32());
    uint32_t n_trunk = c.u32();
    if (input_width <= 0 || latent_dim <= 0 || n_trunk > 64)
        throw IoError("corrupt checkpoint header: " + file.string());

    std::vector<std::pair<int, int>> shapes;
    int in = input_width;
    for (uint32_t i = 0; i < n_trunk; ++i) {
        int out = static_cast<int>(c.u32());
        int cols = static_cast<int>(c.u32());
        if (out <= 0 || cols != in)
            throw IoError("corrupt layer manifest: " + file.string());
        shapes.emplace_back(out, cols);
        in = out;
    }
    EncoderParams p;
    for (auto [out, cols] : shapes) p.trunk.push_back(read_layer(c, out, cols));
    p.head_point = read_layer(c, latent_dim, in);
    p.head_lo = read_layer(c, latent_dim, in);
    p.head_hi = read_layer(c, latent_dim, in);
    if (c.pos != bytes.size())
        throw IoError("trailing bytes in checkpoint: " + file.string());
    return p;
}

}  // namespace semuq
