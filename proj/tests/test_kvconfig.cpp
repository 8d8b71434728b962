#include <doctest.h>

#include <fstream>

#include "test_util.hpp"
#include "tgs/error.hpp"
#include "tgs/kvconfig.hpp"

using namespace tgs;

TEST_CASE("key-value parsing") {
    const auto kv = parse_key_values("# sampler\nT = 64\n\nfps_min=1/16\n  margin_px =  30  \n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("T") == "64");
    CHECK(kv.at("fps_min") == "1/16");
    CHECK(kv.at("margin_px") == "30");
    CHECK_THROWS_AS(parse_key_values("no equals here"), ConfigError);
    CHECK_THROWS_AS(parse_assignment("=3"), ConfigError);
    CHECK(parse_assignment("a=b=c") == std::pair<std::string, std::string>{"a", "b=c"});

    testutil::TempDir dir;
    {
        std::ofstream out(dir / "c.conf");
        out << "fps_max = 2\n";
    }
    CHECK(load_key_values(dir / "c.conf").at("fps_max") == "2");
    CHECK_THROWS_AS(load_key_values(dir / "none.conf"), IoError);
}

TEST_CASE("numbers") {
    CHECK(parse_double("k", "0.5") == 0.5);
    CHECK(parse_double("k", "1/8") == 0.125);
    CHECK(parse_double("k", "-2e-3") == -0.002);
    CHECK_THROWS_AS(parse_double("k", "abc"), ConfigError);
    CHECK_THROWS_AS(parse_double("k", "1/0"), ConfigError);
    CHECK_THROWS_AS(parse_double("k", "2x"), ConfigError);
    CHECK(parse_int("k", "128") == 128);
    CHECK_THROWS_AS(parse_int("k", "1.5"), ConfigError);
}
