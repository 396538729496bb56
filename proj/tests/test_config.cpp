#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "semuq/config.hpp"
#include "semuq/errors.hpp"

using namespace semuq;

TEST_CASE("defaults parse from an empty config") {
    RunConfig cfg = parse_config_text("");
    CHECK(cfg.seed == 7);
    CHECK(cfg.alpha == 0.1);
    CHECK(cfg.delta == 0.1);
    CHECK(cfg.learning_rate == 0.001);
    CHECK(cfg.recon_weight == 10.0);
    CHECK(cfg.epochs == 50);
    CHECK(cfg.batch_size == 64);
    CHECK(cfg.lambda_count == 1000);
    CHECK(cfg.lambda_max == 10.0);
    CHECK(cfg.bound == BoundKind::HoeffdingBentkus);
    CHECK(cfg.corruption == CorruptionKind::Downsample);
    CHECK(cfg.downsample_factors == std::vector<int>{1, 4, 8, 16, 32});
    CHECK(cfg.mask_thresholds == std::vector<double>{0.3, 0.6, 0.9});
    CHECK(cfg.dim_mask() == all_dims(kLatentDim));
}

TEST_CASE("keys parse, comments are ignored") {
    RunConfig cfg = parse_config_text(
        "# a comment\n"
        "seed = 123\n"
        "corruption = mask   # trailing comment\n"
        "mask_thresholds = 0.2, 0.5\n"
        "relevant_dims = 0,2,4\n"
        "alpha = 0.2\n"
        "bound = hoeffding\n");
    CHECK(cfg.seed == 123);
    CHECK(cfg.corruption == CorruptionKind::Mask);
    CHECK(cfg.mask_thresholds == std::vector<double>{0.2, 0.5});
    CHECK(cfg.alpha == 0.2);
    CHECK(cfg.bound == BoundKind::Hoeffding);
    DimMask m = cfg.dim_mask();
    CHECK(count_masked(m) == 3);
    CHECK(m[0]);
    CHECK(m[2]);
    CHECK(m[4]);
    CHECK_FALSE(m[1]);
}

TEST_CASE("unknown, duplicate, and malformed keys are rejected") {
    CHECK_THROWS_AS(parse_config_text("not_a_key = 3\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("seed\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("seed = abc\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("alpha = 1.5\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("dataset_n = 5\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("latent_dim = 4\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("downsample_factors = 1,3\n"),
                    InvalidArgument);
    CHECK_THROWS_AS(parse_config_text("relevant_dims = 9\n"), InvalidArgument);
}

TEST_CASE("canonical text round-trips") {
    RunConfig cfg = parse_config_text(
        "seed = 5\ncorruption = mask\nepochs = 12\nlearning_rate = 0.003\n"
        "relevant_dims = 1,3\noutput_dir = /tmp/x\n");
    std::string canon = canonical_config_text(cfg);
    RunConfig back = parse_config_text(canon);
    CHECK(canonical_config_text(back) == canon);
    CHECK(back.seed == 5);
    CHECK(back.epochs == 12);
    CHECK(back.learning_rate == 0.003);
    CHECK(back.relevant_dims == std::vector<int>{1, 3});
    CHECK(back.output_dir == "/tmp/x");
}

TEST_CASE("derived objects reflect the config") {
    RunConfig cfg = parse_config_text(
        "corruption = mask\nalpha = 0.05\nlambda_max = 20\nlambda_count = 5\n");
    CHECK(cfg.policy().input_channels() == 2);
    CHECK(cfg.train_config().alpha == 0.05);
    CHECK(cfg.risk_spec().alpha == 0.05);
    LambdaGrid grid = cfg.lambda_grid();
    REQUIRE(grid.values.size() == 5);
    CHECK(grid.values.front() == 0.0);
    CHECK(grid.values.back() == 20.0);
    CHECK(grid.values[1] == doctest::Approx(5.0));
}
