#include <doctest.h>

#include "fbc/cli.hpp"
#include "fbc/l2.hpp"
#include "fbc/polytope.hpp"

#include <json.hpp>

#include <sstream>

using namespace fbc;
using nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int st = run_cli(args, out, err);
    return {st, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(FBC_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("text commands") {
    Run a = run({"alexander", data("g3.endo")});
    CHECK(a.status == 0);
    CHECK(a.out.find("Delta = T^2 - A^2*T + A*T + T + 1") == 0);

    Run b = run({"bns-test", data("id2.endo"), "--phi", "a=1,b=1,t=0"});
    CHECK(b.status == 0);
    CHECK(b.out.substr(0, 4) == "out\n");
    CHECK(run({"bns-test", data("id2.endo"), "--phi", "a=1,b=1,t=2"}).out.substr(0, 3) == "in\n");

    CHECK(run({"thurston-norm", data("g3.endo"), "--phi", "a=1/2, t=0"}).out == "1\n");
    CHECK(run({"upg-sigma", data("upg/id2.endo"), data("upg/id2.cert"), "--phi", "a=0,b=0,t=1"}).out.substr(0, 3) ==
          "in\n");
    CHECK(run({"verify-inequalities", data("g3.endo"), "--samples", "10"}).status == 0);
    CHECK(run({"bns-components", data("twist.endo")}).status == 0);
    CHECK(run({"fox-matrix", data("twist.endo")}).out.find("d g(b)/d a = b\n") != std::string::npos);
}

TEST_CASE("exit codes and json errors") {
    CHECK(run({}).status == 2);
    CHECK(run({"no-such-command"}).status == 2);
    CHECK(run({"thurston-norm", data("g3.endo")}).status == 2);
    CHECK(run({"thurston-norm", data("g3.endo"), "--phi", "q=1"}).status == 2);
    Run missing = run({"l2-polytope", data("missing.endo"), "--json"});
    CHECK(missing.status == 2);
    CHECK(json::parse(missing.out)["error"]["kind"] == "input");

    // g3 is not unipotent, so no splitting certificate verifies.
    Run bad = run({"upg-polytope", data("g3.endo"), data("upg/id3.cert"), "--json"});
    CHECK(bad.status == 1);
    CHECK(json::parse(bad.out)["error"]["kind"] == "math");
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("json round trips") {
    Run p = run({"l2-polytope", data("g3.endo"), "--json"});
    REQUIRE(p.status == 0);
    json j = json::parse(p.out);
    CHECK(j["verified"] == true);
    std::vector<std::string> basis;
    VirtualPolytope P = virtual_polytope_from_json(j["polytope"], &basis);
    CHECK(basis == std::vector<std::string>{"a", "t"});
    CHECK(polt_equal(P, VirtualPolytope::of(IntPolytope::hull(2, {{0, 0}, {2, 1}, {0, 2}}))));
    CHECK(to_json(P, basis) == j["polytope"]);

    Run t = run({"thurston-norm", data("g3.endo"), "--phi", "a=1/2, t=3", "--json"});
    json tj = json::parse(t.out);
    std::string text = tj["phi"]["text"];
    Run again = run({"thurston-norm", data("g3.endo"), "--phi", text, "--json"});
    CHECK(json::parse(again.out) == tj);

    Run s = run({"bns-components", data("conj_a1.endo"), "--json"});
    json sj = json::parse(s.out);
    SigmaReport r = sigma_report_from_json(sj);
    CHECK(r.components == 2);
    CHECK(to_json(r, sj["basis"].get<std::vector<std::string>>()) == sj);
    CHECK(r.lookup({0, 0, 1}) == true);
    CHECK(r.lookup({1, 0, -1}) == false);
}
