#include "stlf/config.hpp"
#include "stlf/error.hpp"

#include <gtest/gtest.h>

using namespace stlf;

TEST(Config, DefaultsAndSetters) {
    RunConfig c;
    EXPECT_EQ(c.seed, 1u);
    EXPECT_EQ(c.out_dir, "out");
    c.set("seed", "42");
    c.set("attack.kind", "bounded_opt");
    c.set("attack.p", "2");
    c.set("attack.direction", "inflate");
    c.set("similarity.omega", "geometric:0.5");
    c.set("zones", "WEST, FAR_WEST");
    c.set("models", "f2");
    c.set("synth.start", "2021-01-01T00:00");
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.attack.kind, AttackKind::BoundedOpt);
    EXPECT_EQ(c.attack.p, 2.0);
    EXPECT_EQ(c.attack.direction, 1);
    EXPECT_EQ(c.similarity.omega, similarity::AcfWeights::geometric(0.5));
    EXPECT_EQ(c.zones, (std::vector<std::string>{"WEST", "FAR_WEST"}));
    EXPECT_EQ(c.models, (std::vector<ModelKind>{ModelKind::F2}));
    EXPECT_EQ(c.synth.start, HourlyTimestamp(2021, 1, 1, 0));
}

TEST(Config, RejectsUnknownKeyAndBadValues) {
    RunConfig c;
    try {
        c.set("no.such.key", "1");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
        EXPECT_NE(std::string(e.what()).find("no.such.key"), std::string::npos);
    }
    EXPECT_THROW(c.set("seed", "-1"), Error);
    EXPECT_THROW(c.set("detect.tau", "abc"), Error);
    EXPECT_THROW(c.set("similarity.omega", "fancy"), Error);
    EXPECT_THROW(c.set("weekday_only", "maybe"), Error);
}

TEST(Config, TextFormat) {
    RunConfig c;
    c.apply_text(
        "# comment\n"
        "seed = 7\n"
        "\n"
        "detect.trials = 12   # trailing comment\n"
        "split.ratio=0.8\n");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.trials, 12u);
    EXPECT_EQ(c.split_ratio, 0.8);
    EXPECT_THROW(c.apply_text("no equals sign\n"), Error);
}

TEST(Config, MissingFileNamesPath) {
    RunConfig c;
    try {
        c.apply_file("/no/such/config.cfg");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
        EXPECT_NE(std::string(e.what()).find("/no/such/config.cfg"), std::string::npos);
    }
}

TEST(Config, EveryKeyIsAccepted) {
    // Each documented key must at least be recognised (value errors are fine).
    for (const auto& key : RunConfig::keys()) {
        RunConfig c;
        try {
            c.set(key, "1");
        } catch (const Error& e) {
            EXPECT_EQ(std::string(e.what()).find("unknown"), std::string::npos) << key << ": " << e.what();
        }
    }
    EXPECT_GE(RunConfig::keys().size(), 30u);
}
