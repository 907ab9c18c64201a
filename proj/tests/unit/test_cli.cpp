#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ccw/cli.hpp"
#include "../support/build.hpp"
#include "../support/generators.hpp"

using namespace ccw;
using namespace ccw::cli;
using namespace ccw::build;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(CCW_FIXTURE_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParseError parse_error(const std::string& text) {
    try {
        parse_session(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error for: " << text);
    return ParseError(0, 0, "");
}

const char* kHeader = "chart C (x, y, z)\nform a = dz + 1/2*x*dy - 1/2*y*dx\n";

}  // namespace

TEST_CASE("parse: chart and form") {
    Session s = parse_session("chart C (x,y,z)\nform a = dz + x*dy");
    CHECK(s.charts.size() == 1);
    CHECK(s.forms.size() == 1);
    const Chart& c = s.charts.at("C");
    CHECK(s.forms.at("a") == d(c, "z") + f(v(c, "x")) * d(c, "y"));
    CHECK(s.command_count() == 0);
}

TEST_CASE("parse: trailing operator") {
    ParseError e = parse_error("chart C (x,y,z)\nform a = dz +");
    CHECK(e.line() == 2);
    CHECK(e.column() == 13);
    CHECK(e.expected().find("operand") != std::string::npos);
    // Same without a final newline and with comments around.
    ParseError e2 = parse_error("chart C (x,y,z) # c\nform a = dz + # dangling\n");
    CHECK(e2.line() == 2);
    CHECK(e2.column() == 13);
}

TEST_CASE("parse: exact rational coefficient") {
    Session s = parse_session("chart C (x1, y1, z)\nscalar H = z + 3/2*x1*y1");
    const Chart& c = s.charts.at("C");
    RationalFunction h = s.scalars.at("H");
    CHECK(h == f(v(c, "z") + k(c, 3, 2) * v(c, "x1") * v(c, "y1")));
    CHECK(s.scalars.at("H").to_string() == "3/2*x1*y1 + z");
    Session dec = parse_session("chart C (x)\nscalar g = 0.25*x - 1.5");
    CHECK(dec.scalars.at("g") == f(k(dec.charts.at("C"), 1, 4) * v(dec.charts.at("C"), "x") - k(dec.charts.at("C"), 3, 2)));
}

TEST_CASE("parse: expression forms") {
    Session s = parse_session(
        "chart C (x, y, z)\n"
        "scalar h = (x + y)^2 / (1 + z^2)\n"
        "form a = dz + x*dy\n"
        "form w = da\n"
        "form v = dx^dy^dz * 2\n"
        "form e = d(x*y) - y*dx\n"
        "form u = dh\n"
        "field X = d/dx - x*d/dz + 0\n"
        "field Z = 0\n"
        "point P = (1/2, -1, 0.5)\n"
        "form s = dz +\n"
        "   x*dy");
    const Chart& c = s.charts.at("C");
    CHECK(s.forms.at("w") == wedge(d(c, "x"), d(c, "y")));
    CHECK(s.forms.at("v") == f(k(c, 2)) * wedge(wedge(d(c, "x"), d(c, "y")), d(c, "z")));
    CHECK(s.forms.at("e") == f(v(c, "x")) * d(c, "y"));
    CHECK(s.forms.at("u") == differential(s.scalars.at("h")));
    CHECK(s.forms.at("s") == s.forms.at("a"));
    CHECK(s.fields.at("X") == field(c, {{"x", f(k(c, 1))}, {"z", f(-v(c, "x"))}}));
    CHECK(s.fields.at("Z").is_zero());
    CHECK(s.points.at("P").coords == std::vector<Rational>{Rational(1, 2), Rational(-1), Rational(1, 2)});
}

TEST_CASE("parse: errors carry positions") {
    CHECK(parse_error("chart C (x)\nscalar h = y").column() == 12);
    CHECK(parse_error("chart C (x)\nform a = dx + 1").expected().find("matching") != std::string::npos);
    CHECK(parse_error("chart C (x, y)\nform a = dx + dx^dy").expected() == "forms of equal grade");
    CHECK(parse_error("chart C (x)\nscalar h = x^x").expected() == "integer exponent");
    CHECK(parse_error("chart C (x)\nscalar h = x / 0").expected() == "nonzero divisor");
    CHECK(parse_error("chart C (x)\nscalar h = (x").expected() == "')'");
    CHECK(parse_error("chart C (x)\nscalar h = d/dq").expected() == "coordinate after d/d");
    CHECK(parse_error("chart C (x)\nscalar h = x\nscalar h = x").expected() == "unused name");
    CHECK(parse_error("chart C (x, x)").expected() == "distinct coordinate");
    CHECK(parse_error("chart C (x, dx)").line() == 1);
    CHECK(parse_error("scalar h = 1").expected() == "a chart declaration first");
    CHECK(parse_error("chart C (x)\nfrobnicate now").expected() == "statement or command");
    CHECK(parse_error("chart C (x)\nscalar h = x x").expected() == "operator or end of statement");
    CHECK(parse_error("chart C (x)\nfield X = dx").expected() == "field expression");
    // Names on another chart.
    CHECK(parse_error("chart C (x)\nscalar h = x\nchart D (y)\nscalar g = h").expected() == "name defined on the active chart");
}

TEST_CASE("parse: commands are checked against bindings") {
    std::string h = kHeader;
    // Forward reference.
    ParseError fwd = parse_error(h + "reeb b\nform b = dz");
    CHECK(fwd.line() == 3);
    CHECK(fwd.column() == 6);
    CHECK(fwd.expected() == "form or bundle name");
    CHECK(parse_error(h + "check contract a").expected() == "'contact'");
    CHECK(parse_error(h + "reeb").expected() == "1 arguments");
    CHECK(parse_error(h + "reeb a --grid 3").expected() == "no options");
    CHECK(parse_error(h + "bundle B = a\ngradlike B").expected() == "bundle with a field");
    CHECK(parse_error(h + "gradlike a").expected().find("bundle") != std::string::npos);
    CHECK(parse_error(h + "bundle B = catalog stdconvex 1 1\ngradlike B --mode fast").expected() == "exact or float");
    CHECK(parse_error(h + "bundle B = catalog stdconvex 1 1\ngradlike B --critical Q").expected() ==
          "comma-separated point names");
    CHECK(parse_error(h + "catalog nothing").expected() == "catalog model name");
    CHECK(parse_error(h + "catalog stdconvex 1").expected() == "2 arguments");
    CHECK(parse_error(h + "handles f.json shuffle").line() == 3);
    CHECK(parse_error(h + "handles f.json cancel 1").expected() == "2 arguments");
    CHECK(parse_error(h + "bundle B = catalog weinstein 1 1").line() == 3);
    CHECK(parse_error(h + "suture-scan 1/2").expected() == "2 arguments");
    // Keywords and commands are not names.
    CHECK(parse_error("chart C (x)\nscalar reeb = x").line() == 2);
}

TEST_CASE("print is canonical and stable") {
    std::string text = std::string(kHeader) +
                       "scalar H = z+3/2*x*y\n"
                       "scalar q = (x)/(1+y^2)\n"
                       "field X = x*d/dx + (y + z)*d/dz\n"
                       "point O = (0,0,0)\n"
                       "chart S (s)\n"
                       "map L : S -> C = (s, 0, s^2) where s - 1\n"
                       "use C\n"
                       "bundle B = catalog stdconvex 1 1 --box -2..2\n"
                       "point O1 = (0, 0, 0)\n"
                       "reeb a\n"
                       "gradlike B --critical O1   --grid 5\n"
                       "handles \"my file.json\" validate\n";
    Session s = parse_session(text);
    std::string p = print_session(s);
    CHECK(p.find("scalar H = 3/2*x*y + z\n") != std::string::npos);
    CHECK(p.find("map L : S -> C = (s, 0, s^2) where s - 1\n") != std::string::npos);
    CHECK(p.find("gradlike B --critical O1 --grid 5\n") != std::string::npos);
    CHECK(p.find("handles \"my file.json\" validate\n") != std::string::npos);
    CHECK(s.bundles.at("B").domain.lo[0] == Rational(-2));
    Session again = parse_session(p);
    CHECK(print_session(again) == p);
    CHECK(again.scalars.at("q") == s.scalars.at("q"));
    CHECK(again.maps.at("L").embedding.constraint == s.maps.at("L").embedding.constraint);
}

TEST_CASE("print/parse round trip on generated sessions") {
    testgen::Rng rng(0);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t dim = 1 + trial % 5;
        Chart c = testgen::chart_of_dim(dim);
        std::string text = "chart C (";
        for (std::size_t i = 0; i < dim; ++i) text += (i ? ", " : "") + c.name(i);
        text += ")\n";
        std::vector<RationalFunction> sc;
        std::vector<KForm> fo;
        std::vector<VectorField> fi;
        for (int j = 0; j < 3; ++j) {
            Polynomial num = testgen::random_poly(rng, c, 3, 4);
            RationalFunction r = (j == 2) ? RationalFunction(num, testgen::random_poly(rng, c, 1, 2) + k(c, 7)) : f(num);
            sc.push_back(r);
            text += "scalar s" + std::to_string(j) + " = " + r.to_string() + "\n";
            unsigned g = static_cast<unsigned>(j % (dim + 1));
            fo.push_back(testgen::random_form(rng, c, g, 3));
            text += "form w" + std::to_string(j) + " = " + fo.back().to_string() + "\n";
            fi.push_back(testgen::random_field(rng, c));
            text += "field X" + std::to_string(j) + " = " + fi.back().to_string() + "\n";
        }
        Session s = parse_session(text);
        for (int j = 0; j < 3; ++j) {
            CHECK(s.scalars.at("s" + std::to_string(j)) == sc[j]);
            CHECK(s.forms.at("w" + std::to_string(j)) == fo[j]);
            CHECK(s.fields.at("X" + std::to_string(j)) == fi[j]);
        }
        std::string p = print_session(s);
        CHECK(print_session(parse_session(p)) == p);
    }
}

TEST_CASE("execute: examples") {
    Session s = parse_session(std::string(kHeader) + "check contact a\nreeb a\n");
    ExecResult r = execute(s);
    REQUIRE(r.reports.size() == 2);
    CHECK(r.exit_code == 0);
    CHECK(r.reports[0].outcome == Outcome::Pass);
    CHECK(r.reports[0].payload["kind"] == "ExactConstant");
    CHECK(r.reports[0].payload["constant"] == "1");
    CHECK(r.reports[1].payload["field"] == "d/dz");
    CHECK(r.reports[1].command == "reeb a");

    CHECK(execute(parse_session("")).reports.empty());
    CHECK(emit_report({}, Format::Json) == "[]\n");

    Session mixed = parse_session(std::string(kHeader) + "field D = d/dx\nreeb a\nmu a D\n");
    ExecResult m = execute(mixed);
    CHECK(m.exit_code == 1);
    REQUIRE(m.reports.size() == 2);
    CHECK(m.reports[1].outcome == Outcome::Fail);
    CHECK(m.reports[1].payload["residual"] == "1/2*dy");

    Session dom = parse_session(std::string(kHeader) + "reeb a\nbundle B = catalog stdconvex 1 1\ngradlike B --grid 3,3\nreeb a\n");
    ExecResult de = execute(dom);
    CHECK(de.exit_code == 3);
    CHECK(de.reports.size() == 1);
    CHECK(de.error.find("grid has 2 counts") != std::string::npos);
}

TEST_CASE("execute: handles split through the fixture directory") {
    Session s = parse_session("handles decomp_mixed.json split\nhandles decomp_split.json openbook\n"
                              "handles decomp_mixed.json openbook\nhandles decomp_cancel.json cancel 0 1\n",
                              CCW_FIXTURE_DIR);
    ExecResult r = execute(s);
    REQUIRE(r.reports.size() == 4);
    auto hs = r.reports[0].payload["decomposition"]["handles"];
    REQUIRE(hs.size() == 4);
    CHECK(hs[0]["index"] == 0);
    CHECK(hs[1]["index"] == 1);
    CHECK(hs[2]["index"] == 2);
    CHECK(r.reports[1].payload["open_book"]["page"].size() == 2);
    CHECK(r.reports[2].outcome == Outcome::Fail);
    CHECK(r.reports[2].payload["error"] == "NotSplit");
    CHECK(r.reports[3].payload["decomposition"]["handles"].empty());
    CHECK(r.exit_code == 1);
}

TEST_CASE("execute: global defaults and seed") {
    Session s = parse_session(std::string(kHeader) +
                              "chart P2 (u, v)\nmap Sig : P2 -> C = (u, v, 0)\nuse C\nfield R = d/dz\ndividing Sig a R\n");
    ExecOptions o;
    o.seed = 7;
    ExecResult a = execute(s, o), b = execute(s, o);
    CHECK(a.reports[0].payload == b.reports[0].payload);
    CHECK(a.reports[0].payload["samples"].size() == 8);
    o.seed = 8;
    CHECK(execute(s, o).reports[0].payload["samples"] != a.reports[0].payload["samples"]);

    Session g = parse_session("bundle B = catalog stdconvex 1 1\npoint O = (0, 0, 0)\ngradlike B --critical O\n");
    ExecOptions go;
    go.grid = "5";
    go.mode = "exact";
    ExecResult gr = execute(g, go);
    CHECK(gr.reports[0].payload["points"] == 125);
    CHECK(gr.reports[0].payload["mode"] == "exact");
    CHECK(gr.reports[0].payload["min_ratio_exact"] == "2/5");
}

TEST_CASE("fixture session is deterministic") {
    std::string text = fixture("session.ccw");
    REQUIRE_FALSE(text.empty());
    ExecResult a = execute(parse_session(text, CCW_FIXTURE_DIR));
    ExecResult b = execute(parse_session(text, CCW_FIXTURE_DIR));
    CHECK(a.exit_code == 0);
    CHECK(a.error.empty());
    std::string ja = emit_report(a.reports, Format::Json, false), jb = emit_report(b.reports, Format::Json, false);
    CHECK(ja == jb);
    CHECK(ja.find("wallclock_ms") == std::string::npos);
    CHECK(ja.find("timing_ms") == std::string::npos);
    CHECK(emit_report(a.reports, Format::Json, true).find("timing_ms") != std::string::npos);
    for (const auto& r : a.reports) CHECK_MESSAGE(r.outcome != Outcome::Fail, r.command);
}

TEST_CASE("parse_box and parse_counts") {
    Box b = parse_box("-1..1", 3);
    CHECK(b.lo == std::vector<Rational>(3, Rational(-1)));
    Box c = parse_box("-1/2..1,0..0.25", 2);
    CHECK(c.hi[1] == Rational(1, 4));
    CHECK_THROWS_AS(parse_box("1..-1", 1), InvalidArgument);
    CHECK_THROWS_AS(parse_box("0..1,0..1", 3), InvalidArgument);
    CHECK(parse_counts("5,21", 2) == std::vector<std::size_t>{5, 21});
    CHECK_THROWS_AS(parse_counts("x", 1), InvalidArgument);
    CHECK(parse_number("-0.125") == Rational(-1, 8));
    CHECK_THROWS_AS(parse_number("1.2/3"), InvalidArgument);
}
