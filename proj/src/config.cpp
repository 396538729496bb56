#include "semuq/config.hpp"

#include "semuq/errors.hpp"
#include "semuq/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace semuq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

int64_t parse_i64(const std::string& s, const std::string& key) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("config: " + key + " expects an integer, got '" +
                              s + "'");
    return v;
}

uint64_t parse_u64(const std::string& s, const std::string& key) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("config: " + key +
                              " expects a nonnegative integer, got '" + s + "'");
    return v;
}

double parse_f64(const std::string& s, const std::string& key) {
    try {
        return parse_double(s);
    } catch (const InvalidArgument&) {
        throw InvalidArgument("config: " + key + " expects a number, got '" +
                              s + "'");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
    std::vector<int> out;
    for (const std::string& p : split_list(s))
        out.push_back(static_cast<int>(parse_i64(p, key)));
    return out;
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key) {
    std::vector<double> out;
    for (const std::string& p : split_list(s)) out.push_back(parse_f64(p, key));
    return out;
}

std::vector<int> parse_dims(const std::string& s, const std::string& key) {
    if (s == "all") return {};
    return parse_int_list(s, key);
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(v[i]);
    }
    return out;
}

void validate(const RunConfig& c) {
    if (c.latent_dim != kLatentDim)
        throw InvalidArgument(
            "config: latent_dim must be " + std::to_string(kLatentDim) +
            " (the generator defines exactly that many factors)");
    if (c.image_size < 4)
        throw InvalidArgument("config: image_size must be at least 4");
    if (c.dataset_n < 10)
        throw InvalidArgument("config: dataset_n must be at least 10");
    for (int f : c.downsample_factors) {
        if (f < 1 || c.image_size % f != 0)
            throw InvalidArgument(
                "config: downsample factor " + std::to_string(f) +
                " does not divide image_size " + std::to_string(c.image_size));
    }
    for (double t : c.mask_thresholds)
        if (!(t >= 0.0 && t <= 1.0))
            throw InvalidArgument("config: mask thresholds must lie in [0, 1]");
    if (c.epochs < 0) throw InvalidArgument("config: epochs must be >= 0");
    if (c.batch_size < 1)
        throw InvalidArgument("config: batch_size must be positive");
    if (!(c.learning_rate > 0.0))
        throw InvalidArgument("config: learning_rate must be positive");
    if (c.recon_weight < 0.0)
        throw InvalidArgument("config: recon_weight must be nonnegative");
    if (!(c.alpha > 0.0 && c.alpha < 1.0))
        throw InvalidArgument("config: alpha must lie in (0, 1)");
    if (!(c.delta > 0.0 && c.delta < 1.0))
        throw InvalidArgument("config: delta must lie in (0, 1)");
    if (!(c.lambda_max > 0.0))
        throw InvalidArgument("config: lambda_max must be positive");
    if (c.lambda_count < 2)
        throw InvalidArgument("config: lambda_count must be at least 2");
    if (c.coverage_trials < 1)
        throw InvalidArgument("config: coverage_trials must be positive");
    if (c.coverage_pool < 100)
        throw InvalidArgument("config: coverage_pool must be at least 100");
    if (c.adaptivity_n < 1)
        throw InvalidArgument("config: adaptivity_n must be positive");
    for (int w : c.trunk_widths)
        if (w < 1) throw InvalidArgument("config: trunk widths must be positive");
    for (int d : c.relevant_dims)
        if (d < 0 || d >= c.latent_dim)
            throw InvalidArgument("config: relevant dim out of range: " +
                                  std::to_string(d));
    if (c.relevant_dims.empty() == false && c.viz_dims.empty() == false) {
        DimMask m = c.dim_mask();
        for (int d : c.viz_dims)
            if (d < 0 || d >= c.latent_dim || !m[static_cast<std::size_t>(d)])
                throw InvalidArgument(
                    "config: viz dim " + std::to_string(d) +
                    " is not a relevant dimension");
    }
    for (int d : c.viz_dims)
        if (d < 0 || d >= c.latent_dim)
            throw InvalidArgument("config: viz dim out of range: " +
                                  std::to_string(d));
    if (c.output_dir.empty())
        throw InvalidArgument("config: output_dir must not be empty");
}

}  // namespace

CorruptionPolicy RunConfig::policy() const {
    CorruptionPolicy p;
    p.kind = corruption;
    p.downsample_factors = downsample_factors;
    p.mask_thresholds = mask_thresholds;
    return p;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.alpha = alpha;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.learning_rate = learning_rate;
    t.recon_weight = recon_weight;
    t.seed = seed;
    t.generator = generator_spec();
    return t;
}

DimMask RunConfig::dim_mask() const {
    if (relevant_dims.empty()) return all_dims(static_cast<std::size_t>(latent_dim));
    DimMask m(static_cast<std::size_t>(latent_dim), false);
    for (int d : relevant_dims) m[static_cast<std::size_t>(d)] = true;
    return m;
}

std::vector<int> RunConfig::effective_viz_dims() const {
    if (!viz_dims.empty()) return viz_dims;
    std::vector<int> dims;
    DimMask m = dim_mask();
    for (int d = 0; d < latent_dim; ++d)
        if (m[static_cast<std::size_t>(d)]) dims.push_back(d);
    return dims;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw InvalidArgument("config line " + std::to_string(lineno) +
                                  ": empty key or value");
        if (!seen.insert(key).second)
            throw InvalidArgument("config: duplicate key '" + key + "'");

        if (key == "seed") cfg.seed = parse_u64(value, key);
        else if (key == "latent_dim") cfg.latent_dim = static_cast<int>(parse_i64(value, key));
        else if (key == "image_size") cfg.image_size = static_cast<int>(parse_i64(value, key));
        else if (key == "corruption") cfg.corruption = corruption_kind_from_string(value);
        else if (key == "downsample_factors") cfg.downsample_factors = parse_int_list(value, key);
        else if (key == "mask_thresholds") cfg.mask_thresholds = parse_double_list(value, key);
        else if (key == "dataset_n") cfg.dataset_n = static_cast<std::size_t>(parse_u64(value, key));
        else if (key == "trunk_widths") cfg.trunk_widths = parse_int_list(value, key);
        else if (key == "epochs") cfg.epochs = static_cast<int>(parse_i64(value, key));
        else if (key == "batch_size") cfg.batch_size = static_cast<int>(parse_i64(value, key));
        else if (key == "learning_rate") cfg.learning_rate = parse_f64(value, key);
        else if (key == "recon_weight") cfg.recon_weight = parse_f64(value, key);
        else if (key == "alpha") cfg.alpha = parse_f64(value, key);
        else if (key == "delta") cfg.delta = parse_f64(value, key);
        else if (key == "lambda_max") cfg.lambda_max = parse_f64(value, key);
        else if (key == "lambda_count") cfg.lambda_count = static_cast<int>(parse_i64(value, key));
        else if (key == "bound") cfg.bound = bound_kind_from_string(value);
        else if (key == "relevant_dims") cfg.relevant_dims = parse_dims(value, key);
        else if (key == "coverage_trials") cfg.coverage_trials = static_cast<int>(parse_i64(value, key));
        else if (key == "coverage_pool") cfg.coverage_pool = static_cast<std::size_t>(parse_u64(value, key));
        else if (key == "adaptivity_n") cfg.adaptivity_n = static_cast<int>(parse_i64(value, key));
        else if (key == "viz_dims") cfg.viz_dims = parse_dims(value, key);
        else if (key == "ablate_recon_weights") cfg.ablate_recon_weights = parse_double_list(value, key);
        else if (key == "output_dir") cfg.output_dir = value;
        else throw InvalidArgument("config: unknown key '" + key + "'");
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& file) {
    return parse_config_text(read_text_file(file));
}

std::string canonical_config_text(const RunConfig& c) {
    std::string s;
    s += "seed = " + std::to_string(c.seed) + "\n";
    s += "latent_dim = " + std::to_string(c.latent_dim) + "\n";
    s += "image_size = " + std::to_string(c.image_size) + "\n";
    s += "corruption = " + to_string(c.corruption) + "\n";
    s += "downsample_factors = " + join_ints(c.downsample_factors) + "\n";
    s += "mask_thresholds = " + join_doubles(c.mask_thresholds) + "\n";
    s += "dataset_n = " + std::to_string(c.dataset_n) + "\n";
    s += "trunk_widths = " + join_ints(c.trunk_widths) + "\n";
    s += "epochs = " + std::to_string(c.epochs) + "\n";
    s += "batch_size = " + std::to_string(c.batch_size) + "\n";
    s += "learning_rate = " + fmt_double(c.learning_rate) + "\n";
    s += "recon_weight = " + fmt_double(c.recon_weight) + "\n";
    s += "alpha = " + fmt_double(c.alpha) + "\n";
    s += "delta = " + fmt_double(c.delta) + "\n";
    s += "lambda_max = " + fmt_double(c.lambda_max) + "\n";
    s += "lambda_count = " + std::to_string(c.lambda_count) + "\n";
    s += "bound = " + to_string(c.bound) + "\n";
    s += "relevant_dims = " +
         (c.relevant_dims.empty() ? "all" : join_ints(c.relevant_dims)) + "\n";
    s += "coverage_trials = " + std::to_string(c.coverage_trials) + "\n";
    s += "coverage_pool = " + std::to_string(c.coverage_pool) + "\n";
    s += "adaptivity_n = " + std::to_string(c.adaptivity_n) + "\n";
    s += "viz_dims = " + (c.viz_dims.empty() ? "all" : join_ints(c.viz_dims)) +
         "\n";
    s += "ablate_recon_weights = " + join_doubles(c.ablate_recon_weights) +
         "\n";
    s += "output_dir = " + c.output_dir + "\n";
    return s;
}

}  // namespace semuq
