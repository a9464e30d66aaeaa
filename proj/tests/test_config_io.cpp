#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varlex/config.hpp"
#include "varlex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

using namespace varlex;

TEST_CASE("config parses sections, comments, and typed values") {
    const std::string text =
        "# leading comment\n"
        "[grid]\n"
        "depth = 6            ; trailing comment\n"
        "half_width = 0.5\n"
        "dim=2\n"
        "\n"
        "[run]\n"
        "label = sparse demo\n"
        "jobs = 4\n"
        "verbose = on\n"
        "levels = 1, 2.5, -3e2\n"
        "limit = inf\n";
    const Config cfg = Config::parse_string(text, "cfg");

    CHECK(cfg.has_section("grid"));
    CHECK(cfg.has("grid", "depth"));
    CHECK(!cfg.has("grid", "missing"));
    CHECK(cfg.require_int("grid", "depth") == 6);
    CHECK(cfg.require_double("grid", "half_width") == 0.5);
    CHECK(cfg.get_int("grid", "dim", 1) == 2);
    CHECK(cfg.get_string("run", "label", "") == "sparse demo");
    CHECK(cfg.get_bool("run", "verbose", false));
    CHECK(cfg.get_bool("run", "quiet", true));
    CHECK(cfg.get_double("run", "absent", 7.5) == 7.5);
    const std::vector<double> levels = cfg.require_doubles("run", "levels");
    REQUIRE(levels.size() == 3);
    CHECK(levels[0] == 1.0);
    CHECK(levels[1] == 2.5);
    CHECK(levels[2] == -300.0);
    CHECK(std::isinf(cfg.require_double("run", "limit")));

    const std::vector<std::string> keys = cfg.keys("run");
    REQUIRE(keys.size() == 5);
    CHECK(keys[0] == "label");
    CHECK(keys[4] == "limit");
    CHECK(cfg.keys("nope").empty());
}

TEST_CASE("config errors carry the origin, line number, and key path") {
    CHECK_THROWS_WITH_AS(Config::parse_string("x = 1\n", "cfg"),
                         "cfg:1: key 'x' appears before any [section] header", ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_string("[a]\nkey value\n", "cfg"),
                         "cfg:2: expected 'key = value', got 'key value'", ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_string("[a\n", "cfg"),
                         "cfg:1: malformed section header '[a'", ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_string("[ ]\n", "cfg"), "cfg:1: empty section name",
                         ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_string("[s]\na = 1\na = 2\n", "cfg"),
                         "cfg:3: duplicate key 's.a'", ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_string("[s]\n= 5\n", "cfg"), "cfg:2: empty key",
                         ConfigError);

    const Config cfg = Config::parse_string("[s]\nx = nope\n", "cfg");
    CHECK_THROWS_WITH_AS(cfg.require_double("a", "b"), "cfg: missing required key 'a.b'",
                         ConfigError);
    CHECK_THROWS_AS(cfg.require_string("s", "y"), ConfigError);
    CHECK_THROWS_WITH_AS(cfg.require_double("s", "x"), "cfg: s.x: expected a number, got 'nope'",
                         ConfigError);
    CHECK_THROWS_AS(cfg.require_int("s", "x"), ConfigError);
}

TEST_CASE("scalar parsers accept the documented spellings and nothing else") {
    CHECK(parse_double(" 2.5e3 ", "t") == 2500.0);
    CHECK(std::isinf(parse_double("+inf", "t")));
    CHECK(parse_double("-inf", "t") == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_double("12x", "t"), ConfigError);
    CHECK(parse_int(" -42 ", "t") == -42);
    CHECK_THROWS_AS(parse_int("3.5", "t"), ConfigError);
    for (const char* yes : {"true", "TRUE", "1", "yes", "On"}) CHECK(parse_bool(yes, "t"));
    for (const char* no : {"false", "0", "no", "OFF"}) CHECK(!parse_bool(no, "t"));
    CHECK_THROWS_AS(parse_bool("maybe", "t"), ConfigError);
    CHECK_THROWS_AS(parse_doubles("1,,2", "t"), ConfigError);
    CHECK_THROWS_AS(parse_doubles("", "t"), ConfigError);
}

TEST_CASE("config set overrides in place and appends new keys") {
    Config cfg = Config::parse_string("[s]\na = 1\nb = 2\n", "cfg");
    cfg.set("s", "a", "10");
    cfg.set("s", "c", "3");
    cfg.set("fresh", "k", "v");
    CHECK(cfg.require_int("s", "a") == 10);
    CHECK(cfg.require_int("s", "c") == 3);
    CHECK(cfg.get_string("fresh", "k", "") == "v");
    const std::vector<std::string> keys = cfg.keys("s");
    REQUIRE(keys.size() == 3);
    CHECK(keys[0] == "a");
    CHECK(keys[2] == "c");
}

TEST_CASE("number formatting is reproducible and round-trips exactly") {
    CHECK(format_number(2.5) == "2.5");
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_integer(-1234567890123LL) == "-1234567890123");
    for (double v : {1.0 / 3.0, 1e-300, 6.02e23, -0.0, 123456789.123456789}) {
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("report CSV output matches golden bytes") {
    Report r("demo", {"name", "value"});
    r.summary("alpha", 2.5);
    r.summary("count", int64_t{7});
    r.summary_flag("ok", true);
    r.summary("label", std::string("x y"));
    r.summary("bad", std::numeric_limits<double>::infinity());
    r.add_row({"a", "1"});
    r.add_row({"b", format_number(0.1)});

    std::ostringstream out;
    r.write_csv(out);
    const std::string expected =
        "# report = demo\n"
        "# alpha = 2.5\n"
        "# count = 7\n"
        "# ok = true\n"
        "# label = x y\n"
        "# bad = inf\n"
        "name,value\n"
        "a,1\n"
        "b,0.10000000000000001\n";
    CHECK(out.str() == expected);
    CHECK(r.row_count() == 2);
    CHECK_THROWS_AS(r.add_row({"only one cell"}), std::invalid_argument);
}

TEST_CASE("report JSON output matches golden bytes and quotes non-scalars") {
    Report r("demo", {"name", "value"});
    r.summary("alpha", 2.5);
    r.summary("ok", std::string("true"));
    r.summary("label", std::string("he said \"hi\"\n"));
    r.summary("bad", std::nan(""));
    r.add_row({"a", "1"});
    r.add_row({"b", "-inf"});

    std::ostringstream out;
    r.write_json(out);
    const std::string expected =
        "{\n"
        "  \"report\": \"demo\",\n"
        "  \"summary\": {\n"
        "    \"alpha\": 2.5,\n"
        "    \"ok\": true,\n"
        "    \"label\": \"he said \\\"hi\\\"\\n\",\n"
        "    \"bad\": \"nan\"\n"
        "  },\n"
        "  \"rows\": [\n"
        "    {\"name\": \"a\", \"value\": 1},\n"
        "    {\"name\": \"b\", \"value\": \"-inf\"}\n"
        "  ]\n"
        "}\n";
    CHECK(out.str() == expected);
}

TEST_CASE("empty report still renders a complete document") {
    Report r("empty", {"c"});
    std::ostringstream csv;
    r.write_csv(csv);
    CHECK(csv.str() == "# report = empty\nc\n");
    std::ostringstream json;
    r.write_json(json);
    CHECK(json.str() == "{\n  \"report\": \"empty\",\n  \"summary\": {},\n  \"rows\": []\n}\n");
}

TEST_CASE("report files carry the same bytes as the stream writers") {
    Report r("filecheck", {"k"});
    r.summary("x", 1.5);
    r.add_row({"v"});
    const std::string path = r.write_file("/tmp", "varlex_report_test", "json");
    CHECK(path == "/tmp/varlex_report_test.json");
    std::ifstream in(path, std::ios::binary);
    std::stringstream got;
    got << in.rdbuf();
    std::ostringstream want;
    r.write_json(want);
    CHECK(got.str() == want.str());
    CHECK_THROWS_AS(r.write_file("/tmp", "x", "xml"), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("grid functions round-trip through their exchange format") {
    const Grid grid{Box{1, {0.25, 0.0}, 0.75}, 3};
    GridFunction f(grid);
    const double values[] = {1e-300, -1.5, 0.1,  3.14159265358979,
                             0.0,    -0.0, 7e5,  1.0 / 3.0};
    for (int64_t i = 0; i < f.size(); ++i) f[i] = values[i];
    const std::string path = "/tmp/varlex_gridfn_test.csv";
    write_grid_function(path, f);
    const GridFunction g = read_grid_function(path);
    CHECK(g.grid == grid);
    REQUIRE(g.size() == f.size());
    for (int64_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
    std::remove(path.c_str());

    const Grid grid2{Box{2, {0.0, 0.0}, 1.0}, 2};
    GridFunction h(grid2, [](const Point& x) { return x[0] + 10.0 * x[1]; });
    write_grid_function(path, h);
    const GridFunction h2 = read_grid_function(path);
    CHECK(h2.grid == grid2);
    for (int64_t i = 0; i < h.size(); ++i) CHECK(h2[i] == h[i]);
    std::remove(path.c_str());
}

TEST_CASE("grid function reader rejects missing or malformed files") {
    CHECK_THROWS_AS(read_grid_function("/tmp/varlex_does_not_exist.csv"), std::runtime_error);

    const std::string path = "/tmp/varlex_gridfn_bad.csv";
    {
        std::ofstream out(path);
        out << "depth,3\n";
    }
    CHECK_THROWS_AS(read_grid_function(path), std::runtime_error);
    {
        std::ofstream out(path);
        out << "dim,1\ndepth,1\ncenter,0,0\nhalf_width,1\nvalues,2\n0.5\n";
    }
    CHECK_THROWS_AS(read_grid_function(path), std::runtime_error);
    {
        std::ofstream out(path);
        out << "dim,1\ndepth,1\ncenter,0,0\nhalf_width,1\nvalues,2\n0.5\nbogus\n";
    }
    CHECK_THROWS_AS(read_grid_function(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("json escaping covers quotes, backslashes, and control spacing") {
    CHECK(json_escape("plain") == "plain");
    CHECK(json_escape("a\"b") == "a\\\"b");
    CHECK(json_escape("a\\b") == "a\\\\b");
    CHECK(json_escape("a\nb\tc") == "a\\nb\\tc");
}
