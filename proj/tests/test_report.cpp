#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polygreen/report.h"

#include <cstdlib>

using namespace polygreen;

TEST_CASE("doubles round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0063293996988412066}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.2) == "0.20000000000000001");
}

TEST_CASE("scan CSV layout") {
    ScanReport r;
    r.epsilon_grid = {0.2, 0.1};
    r.statistic = {1.5, 0.25};
    r.sample_count = 12;
    r.seed = 7;
    CHECK(scan_csv(r) == "epsilon,statistic,samples,seed\n0.20000000000000001,1.5,12,7\n0.10000000000000001,0.25,12,7\n");
}

TEST_CASE("glue CSV layout") {
    GlueReport g;
    g.epsilon = 0.01;
    g.delta = 0.15;
    g.sup_residual = 2.0;
    g.samples = 3;
    g.seed = 9;
    CHECK(glue_csv({g}) == "epsilon,delta,sup_residual,samples,seed\n0.01,0.14999999999999999,2,3,9\n");
}

TEST_CASE("pair CSV layout") {
    PairRecord p{0.5, Point{1.0, 2.0}, Point{-1.0, 0.5}, 3.0, true};
    CHECK(pairs_csv({p}) == "epsilon,x0,x1,y0,y1,value,flagged\n0.5,1,2,-1,0.5,3,1\n");
    CHECK(pairs_csv({}) == "epsilon,value,flagged\n");
}

TEST_CASE("JSON reports embed the config") {
    ScanReport r;
    r.epsilon_grid = {0.1};
    r.statistic = {2.0};
    r.metadata = {{"experiment", "scan-uniform"}};
    const nlohmann::json config = {{"n", 5}, {"seed", 7}};
    const nlohmann::json j = scan_json(r, config);
    CHECK(j.at("config") == config);
    CHECK(j.at("rows").at(0).at("statistic") == 2.0);
    CHECK(j.at("metadata").at("experiment") == "scan-uniform");

    const nlohmann::json g = glue_json({GlueReport{}}, config);
    CHECK(g.at("config") == config);

    GreenEvaluation e;
    e.value = 1.25;
    e.modes_used = 11;
    const nlohmann::json ej = evaluation_json(e);
    CHECK(ej.at("value") == 1.25);
    CHECK(ej.at("modes_used") == 11);
    CHECK(ej.contains("truncation_estimate"));
}
