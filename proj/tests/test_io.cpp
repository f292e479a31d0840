#include <gtest/gtest.h>

#include <random>

#include "cstar/io.hpp"
#include "fixtures.hpp"

using namespace cstar;
namespace ct = cstar::testing;

namespace {

std::string data_file(const std::string& name)
{
    return std::string(CSTAR_DATA_DIR) + "/" + name;
}

} // namespace

TEST(Json, PolyVectorRoundTrip)
{
    std::mt19937_64 rng(70);
    for (int arity = 0; arity <= 3; ++arity) {
        PolyVector v = ct::random_polyvector(rng, 3, arity, 3);
        EXPECT_EQ(polyvector_from_json(parse_json(dump(to_json(v)), "mem")), v);
    }
    Json j = to_json(ct::so3());
    EXPECT_EQ(j["degree"], 1);
    EXPECT_EQ(j["components"]["1,2"], "x3");
    EXPECT_EQ(j["components"]["2,3"], "x1");
    EXPECT_EQ(j["components"]["1,3"], "-x2");
}

TEST(Json, DataFilesParse)
{
    EXPECT_EQ(polyvector_from_json(parse_json(read_text_file(data_file("so3.json")), "so3")), ct::so3());
    EXPECT_EQ(polyvector_from_json(parse_json(read_text_file(data_file("moyal.json")), "moyal")), ct::moyal());
    EXPECT_EQ(polyvector_from_json(parse_json(read_text_file(data_file("nondiv.json")), "nondiv")), ct::nondiv());
    VolumeForm vol = volume_from_json(parse_json(read_text_file(data_file("vol0_d3.json")), "vol"));
    EXPECT_EQ(vol.dim(), 3);
    EXPECT_TRUE(vol.log_density.is_zero());
}

TEST(Json, ShippedExactTableMatchesBuiltin)
{
    WeightTable shipped = table_from_json(parse_json(read_text_file(data_file("weights_exact.json")), "table"));
    EXPECT_EQ(shipped.entries(), builtin_exact_table().entries());
    EXPECT_EQ(read_text_file(data_file("weights_exact.json")), dump(to_json(builtin_exact_table())));
}

TEST(Json, WeightTableRoundTrip)
{
    WeightTable t = builtin_exact_table();
    WeightEntry mc;
    mc.graph_key = "1;3;b1,b2";
    mc.alphas = {0, 0, 1};
    mc.value = 0.49871234567;
    mc.std_error = 0.0021;
    mc.samples = 100000;
    mc.seed = 42;
    mc.rejected = 3;
    t.insert(mc);
    WeightTable back = table_from_json(parse_json(dump(to_json(t)), "mem"));
    EXPECT_EQ(back.entries(), t.entries());
    EXPECT_EQ(back.provenance(), "mixed");
}

TEST(Json, OperatorAndGraphRoundTrip)
{
    std::mt19937_64 rng(71);
    PolyDiffOperator op = ct::random_operator(rng, 3, 2);
    EXPECT_EQ(operator_from_json(to_json(op)), op);
    auto graphs = star_graphs(2, 2);
    EXPECT_EQ(graphs_from_json(to_json(graphs)), graphs);
}

TEST(Json, MalformedInputs)
{
    auto pv = [](const char* text) { return polyvector_from_json(parse_json(text, "t")); };
    EXPECT_THROW(parse_json("{", "t"), FormatError);
    EXPECT_THROW(pv(R"({"degree": 1, "components": {}})"), FormatError);
    EXPECT_THROW(pv(R"({"dim": 0, "degree": 1})"), FormatError);
    EXPECT_THROW(pv(R"({"dim": 2, "degree": 1, "components": {"1": "x1"}})"), FormatError);
    EXPECT_THROW(pv(R"({"dim": 2, "degree": 1, "components": {"1,3": "x1"}})"), FormatError);
    EXPECT_THROW(pv(R"({"dim": 2, "degree": 1, "components": {"1,2": 5}})"), FormatError);
    EXPECT_THROW(pv(R"({"dim": 2, "degree": 1, "components": {"1,2": "x9"}})"), ParseError);
    EXPECT_THROW(table_from_json(parse_json(R"({"rows": []})", "t")), FormatError);
    EXPECT_THROW(table_from_json(parse_json(R"({"entries": [{"graph": "1;2;b1,b2", "exact": "1/x"}]})", "t")),
                 FormatError);
    EXPECT_THROW(read_text_file("/nonexistent/file.json"), std::runtime_error);
}

TEST(Json, RepeatedAxesCancel)
{
    // Components given twice in opposite orders add with the permutation sign.
    PolyVector v = polyvector_from_json(
        parse_json(R"({"dim": 2, "degree": 1, "components": {"1,2": "x1", "2,1": "x1"}})", "t"));
    EXPECT_TRUE(v.is_zero());
}

TEST(Hash, Fnv1a)
{
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
