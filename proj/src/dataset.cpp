#include "semuq/dataset.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <sstream>

namespace semuq {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'Q', 'D', 'A', 'T', 'A', '\0'};
constexpr uint32_t kVersion = 1;

class ByteWriter {
public:
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back((v >> (8 * i)) & 0xff);
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back((v >> (8 * i)) & 0xff);
    }
    void f32(float v) {
        u32(std::bit_cast<uint32_t>(v));
    }
    void raw(const char* data, std::size_t n) {
        bytes_.insert(bytes_.end(), data, data + n);
    }
    std::vector<unsigned char> take() { return std::move(bytes_); }

private:
    std::vector<unsigned char> bytes_;
};

class ByteReader {
public:
    ByteReader(const std::vector<unsigned char>& bytes, std::string path)
        : bytes_(bytes), path_(std::move(path)) {}

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    void raw(char* out, std::size_t n) {
        need(n);
        std::memcpy(out, bytes_.data() + pos_, n);
        pos_ += n;
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size())
            throw IoError("truncated dataset file: " + path_);
    }
    const std::vector<unsigned char>& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

double corruption_param(const CorruptionSpec& c) {
    switch (c.kind) {
        case CorruptionKind::Downsample: return c.downsample_factor;
        case CorruptionKind::Mask: return c.mask_threshold;
        case CorruptionKind::None: break;
    }
    return 0.0;
}

std::filesystem::path sidecar_path(const std::filesystem::path& file) {
    std::filesystem::path p = file;
    p.replace_extension();
    p += "_corruptions.csv";
    return p;
}

}  // namespace

SplitSizes split_sizes(std::size_t n) {
    SplitSizes s;
    s.train = n * 8 / 10;
    s.calibration = n / 10;
    s.validation = n - s.train - s.calibration;
    return s;
}

LatentVector sample_latent(RngStream& rng) {
    LatentVector z(kLatentDim);
    for (double& v : z) v = rng.normal();
    return z;
}

Sample make_sample(uint64_t sample_seed, const CorruptionPolicy& policy,
                   const GeneratorSpec& g) {
    RngStream rng(sample_seed);
    Sample s;
    s.z = sample_latent(rng);
    ImageGrid clean = render(s.z, g);
    s.corruption.kind = policy.kind;
    switch (policy.kind) {
        case CorruptionKind::None:
            break;
        case CorruptionKind::Downsample: {
            if (policy.downsample_factors.empty())
                throw InvalidArgument("downsample policy has no factors");
            uint32_t k = rng.uniform_index(
                static_cast<uint32_t>(policy.downsample_factors.size()));
            s.corruption.downsample_factor = policy.downsample_factors[k];
            break;
        }
        case CorruptionKind::Mask: {
            if (policy.mask_thresholds.empty())
                throw InvalidArgument("mask policy has no thresholds");
            uint32_t k = rng.uniform_index(
                static_cast<uint32_t>(policy.mask_thresholds.size()));
            s.corruption.mask_threshold = policy.mask_thresholds[k];
            break;
        }
    }
    s.x = apply_corruption(clean, s.corruption, rng);
    return s;
}

DatasetSplit make_dataset(std::size_t n, const CorruptionPolicy& policy,
                          uint64_t seed, const GeneratorSpec& g) {
    if (n < 10)
        throw InvalidArgument("dataset size must be at least 10, got " +
                              std::to_string(n));
    SplitSizes sizes = split_sizes(n);
    uint64_t base = derive_seed(seed, "dataset");

    DatasetSplit out;
    out.train.reserve(sizes.train);
    out.calibration.reserve(sizes.calibration);
    out.validation.reserve(sizes.validation);
    // Samples are i.i.d. by construction, so consecutive index ranges give
    // disjoint random splits.
    for (std::size_t i = 0; i < n; ++i) {
        Sample s = make_sample(derive_seed(base, static_cast<uint64_t>(i)),
                               policy, g);
        if (i < sizes.train)
            out.train.push_back(std::move(s));
        else if (i < sizes.train + sizes.calibration)
            out.calibration.push_back(std::move(s));
        else
            out.validation.push_back(std::move(s));
    }
    return out;
}

void save_split(const std::filesystem::path& file,
                const std::vector<Sample>& samples, const DatasetMeta& meta) {
    ByteWriter w;
    w.raw(kMagic, sizeof(kMagic));
    w.u32(kVersion);
    w.u32(kLatentDim);
    w.u32(static_cast<uint32_t>(meta.generator.height));
    w.u32(static_cast<uint32_t>(meta.generator.width));
    w.u32(static_cast<uint32_t>(meta.channels));
    w.u64(samples.size());
    w.u64(meta.seed);
    w.u32(static_cast<uint32_t>(meta.policy.kind));
    switch (meta.policy.kind) {
        case CorruptionKind::None:
            w.u32(0);
            break;
        case CorruptionKind::Downsample:
            w.u32(static_cast<uint32_t>(meta.policy.downsample_factors.size()));
            for (int f : meta.policy.downsample_factors)
                w.f32(static_cast<float>(f));
            break;
        case CorruptionKind::Mask:
            w.u32(static_cast<uint32_t>(meta.policy.mask_thresholds.size()));
            for (double t : meta.policy.mask_thresholds)
                w.f32(static_cast<float>(t));
            break;
    }

    std::size_t px = static_cast<std::size_t>(meta.generator.height) *
                     meta.generator.width * meta.channels;
    for (const Sample& s : samples) {
        if (s.z.size() != kLatentDim || s.x.size() != px)
            throw InvalidArgument("sample shape does not match dataset meta");
        for (double v : s.z) w.f32(static_cast<float>(v));
    }
    for (const Sample& s : samples)
        for (double v : s.x.pixels) w.f32(static_cast<float>(v));

    write_binary_file(file, w.take());

    std::string csv = "index,kind,parameter\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        csv += fmt_int(static_cast<int64_t>(i)) + "," +
               to_string(samples[i].corruption.kind) + "," +
               fmt_double(corruption_param(samples[i].corruption)) + "\n";
    }
    write_text_file(sidecar_path(file), csv);
}

std::vector<Sample> load_split(const std::filesystem::path& file,
                               DatasetMeta* meta_out) {
    std::vector<unsigned char> bytes = read_binary_file(file);
    ByteReader r(bytes, file.string());

    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("not a dataset file (bad magic): " + file.string());
    uint32_t version = r.u32();
    if (version != kVersion)
        throw IoError("unsupported dataset version " +
                      std::to_string(version) + ": " + file.string());
    uint32_t d = r.u32();
    if (d != kLatentDim)
        throw IoError("dataset latent dim " + std::to_string(d) +
                      " does not match build (" + std::to_string(kLatentDim) +
                      "): " + file.string());
    DatasetMeta meta;
    meta.generator.height = static_cast<int>(r.u32());
    meta.generator.width = static_cast<int>(r.u32());
    meta.channels = static_cast<int>(r.u32());
    uint64_t n = r.u64();
    meta.seed = r.u64();
    uint32_t kind = r.u32();
    if (kind > 2) throw IoError("corrupt policy kind: " + file.string());
    meta.policy.kind = static_cast<CorruptionKind>(kind);
    uint32_t nparams = r.u32();
    if (nparams > 1024) throw IoError("corrupt policy block: " + file.string());
    meta.policy.downsample_factors.clear();
    meta.policy.mask_thresholds.clear();
    for (uint32_t i = 0; i < nparams; ++i) {
        float v = r.f32();
        if (meta.policy.kind == CorruptionKind::Downsample)
            meta.policy.downsample_factors.push_back(static_cast<int>(v));
        else if (meta.policy.kind == CorruptionKind::Mask)
            meta.policy.mask_thresholds.push_back(v);
    }
    if (meta.generator.height <= 0 || meta.generator.width <= 0 ||
        meta.channels <= 0)
        throw IoError("corrupt dataset header: " + file.string());

    std::vector<Sample> samples(n);
    for (Sample& s : samples) {
        s.z.resize(kLatentDim);
        for (double& v : s.z) v = r.f32();
    }
    std::size_t px = static_cast<std::size_t>(meta.generator.height) *
                     meta.generator.width * meta.channels;
    for (Sample& s : samples) {
        s.x.height = meta.generator.height;
        s.x.width = meta.generator.width;
        s.x.channels = meta.channels;
        s.x.pixels.resize(px);
        for (double& v : s.x.pixels) v = r.f32();
    }
    if (!r.exhausted())
        throw IoError("trailing bytes in dataset file: " + file.string());

    // Optional sidecar with per-sample corruption parameters.
    std::filesystem::path sc = sidecar_path(file);
    if (std::filesystem::exists(sc)) {
        std::istringstream in(read_text_file(sc));
        std::string line;
        std::getline(in, line);  // header
        std::size_t i = 0;
        while (std::getline(in, line) && i < samples.size()) {
            if (line.empty()) continue;
            auto fields = split_csv_line(line);
            if (fields.size() != 3)
                throw IoError("malformed sidecar row: " + sc.string());
            CorruptionSpec& c = samples[i].corruption;
            c.kind = corruption_kind_from_string(fields[1]);
            double p = parse_double(fields[2]);
            if (c.kind == CorruptionKind::Downsample)
                c.downsample_factor = static_cast<int>(p);
            else if (c.kind == CorruptionKind::Mask)
                c.mask_threshold = p;
            ++i;
        }
    }
    if (meta_out) *meta_out = meta;
    return samples;
}

void save_dataset(const std::filesystem::path& dir, const DatasetSplit& data,
                  const DatasetMeta& meta) {
    std::filesystem::create_directories(dir);
    save_split(dir / "train.suqd", data.train, meta);
    save_split(dir / "calibration.suqd", data.calibration, meta);
    save_split(dir / "validation.suqd", data.validation, meta);

    nlohmann::json policy;
    policy["kind"] = to_string(meta.policy.kind);
    if (meta.policy.kind == CorruptionKind::Downsample)
        policy["downsample_factors"] = meta.policy.downsample_factors;
    if (meta.policy.kind == CorruptionKind::Mask)
        policy["mask_thresholds"] = meta.policy.mask_thresholds;

    nlohmann::json manifest;
    manifest["format_version"] = kVersion;
    manifest["latent_dim"] = kLatentDim;
    manifest["height"] = meta.generator.height;
    manifest["width"] = meta.generator.width;
    manifest["channels"] = meta.channels;
    manifest["seed"] = meta.seed;
    manifest["policy"] = policy;
    manifest["splits"] = {
        {"train", {{"file", "train.suqd"}, {"n", data.train.size()}}},
        {"calibration",
         {{"file", "calibration.suqd"}, {"n", data.calibration.size()}}},
        {"validation",
         {{"file", "validation.suqd"}, {"n", data.validation.size()}}},
    };
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

DatasetSplit load_dataset(const std::filesystem::path& dir,
                          DatasetMeta* meta_out) {
    DatasetSplit out;
    DatasetMeta meta;
    out.train = load_split(dir / "train.suqd", &meta);
    DatasetMeta other;
    out.calibration = load_split(dir / "calibration.suqd", &other);
    out.validation = load_split(dir / "validation.suqd", &other);
    if (meta_out) *meta_out = meta;
    return out;
}

}  // namespace semuq
