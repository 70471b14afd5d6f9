#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace funclust;

namespace {

std::string error_code(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

}  // namespace

TEST(FormatNumber, ShortestForm) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(3.5), "3.5");
    EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
    EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(DistanceCsv, FullMatrixWithHeader) {
    std::istringstream in("A,B,C\n0,4,3\n4,0,5\n3,5,0\n");
    const auto x = read_distance_csv(in);
    EXPECT_EQ(x.labels(), (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(x(1, 2), 5.0);
}

TEST(DistanceCsv, LowerTriangleWithComments) {
    std::istringstream in("# two points\np,q\n0\n3,0\n\n");
    const auto x = read_distance_csv(in);
    EXPECT_EQ(x.size(), 2U);
    EXPECT_EQ(x(0, 1), 3.0);
    EXPECT_EQ(x.label(1), "q");
}

TEST(DistanceCsv, LabelRowIsRequired) {
    std::istringstream in("0,1\n1,0\n");
    EXPECT_EQ(error_code([&] { read_distance_csv(in); }), "BadShape");
}

TEST(DistanceCsv, Errors) {
    std::istringstream asym("a,b\n0,1\n2,0\n");
    EXPECT_EQ(error_code([&] { read_distance_csv(asym); }), "Asymmetric");
    std::istringstream ragged("a,b\n0,1,2\n1,0\n");
    EXPECT_EQ(error_code([&] { read_distance_csv(ragged); }), "BadShape");
    std::istringstream junk("a,b\n0,x\nx,0\n");
    EXPECT_NE(error_code([&] { read_distance_csv(junk); }), "none");
    std::istringstream inf("a,b\n0,inf\ninf,0\n");
    EXPECT_EQ(error_code([&] { read_distance_csv(inf); }), "NonFinite");
    EXPECT_EQ(error_code([] { read_distance_csv(std::string("/nonexistent/file.csv")); }), "IoError");
}

TEST(DistanceCsv, WriteThenRead) {
    auto rng = make_rng(80);
    const auto x = random_metric_space(rng, 6);
    std::ostringstream out;
    write_distance_csv(out, x);
    std::istringstream in(out.str());
    const auto back = read_distance_csv(in);
    EXPECT_EQ(back.labels(), x.labels());
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_NEAR(back(i, j), x(i, j), 1e-10 * x.diameter());
        }
    }
}

TEST(PointCsv, HeaderAndLabels) {
    std::istringstream in("label,x\na,0\nb,1\nc,3\n");
    const auto [cloud, labels] = read_point_csv(in);
    EXPECT_EQ(labels, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(cloud.dimension(), 1U);
    EXPECT_EQ(cloud(0, 2), 3.0);
}

TEST(PointCsv, BareCoordinates) {
    std::istringstream in("0,0\n3,4\n");
    const auto [cloud, labels] = read_point_csv(in);
    EXPECT_EQ(labels, (std::vector<std::string>{"0", "1"}));
    EXPECT_EQ(cloud(0, 1), 5.0);
    std::istringstream ragged("0,0\n3\n");
    EXPECT_EQ(error_code([&] { read_point_csv(ragged); }), "BadShape");
}

TEST(Dendrogram, TextRoundTrip) {
    const auto x = validate_metric({{0, 4, 3}, {4, 0, 5}, {3, 5, 0}}, false, {"A", "B", "C"});
    const auto p = rgen(x);
    std::ostringstream out;
    write_dendrogram_text(out, p);
    EXPECT_EQ(out.str(), "r=0; A|B|C\nr=3; A,C|B\nr=4; A,B,C\n");
    std::istringstream in(out.str());
    const auto back = read_dendrogram_text(in);
    EXPECT_TRUE(equivalent(back, p));
    EXPECT_EQ(back.labels(), p.labels());
    std::istringstream bad("r=1; A|B\n");
    EXPECT_EQ(error_code([&] { read_dendrogram_text(bad); }), "BadShape");
}

TEST(Dendrogram, Json) {
    const auto x = validate_metric({{0, 2}, {2, 0}}, false, {"p", "q"});
    const auto j = dendrogram_json(rgen(x));
    EXPECT_EQ(j["labels"], nlohmann::json({"p", "q"}));
    ASSERT_EQ(j["levels"].size(), 2U);
    EXPECT_EQ(j["levels"][1]["r"], 2.0);
    EXPECT_EQ(j["levels"][1]["blocks"], nlohmann::json::parse(R"([["p","q"]])"));
}

TEST(Dendrogram, DotHasOneNodePerMerge) {
    const auto x = validate_metric({{0, 4, 3}, {4, 0, 5}, {3, 5, 0}}, false, {"A", "B", "C"});
    std::ostringstream out;
    write_dendrogram_dot(out, rgen(x));
    const std::string dot = out.str();
    EXPECT_EQ(dot.rfind("digraph", 0), 0U);
    EXPECT_NE(dot.find("label=\"r=3\""), std::string::npos);
    EXPECT_NE(dot.find("label=\"r=4\""), std::string::npos);
    std::size_t edges = 0;
    for (std::size_t at = dot.find("->"); at != std::string::npos; at = dot.find("->", at + 1)) {
        ++edges;
    }
    EXPECT_EQ(edges, 4U);
}

TEST(Correspondence, WrittenByLabel) {
    const auto x = validate_metric({{0, 1}, {1, 0}}, false, {"p", "q"});
    const auto y = validate_metric(std::vector<std::vector<double>>{{0.0}}, false, {"o"});
    std::ostringstream out;
    write_correspondence(out, {{0, 0}, {1, 0}}, x, y);
    EXPECT_EQ(out.str(), "p,o\nq,o\n");
}
