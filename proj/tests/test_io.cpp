/**
 * @file test_io.cpp
 * @brief Spec JSON, dataset CSV, trace JSONL and curve tables.
 */

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "qdiscount/io.hpp"

using namespace qdiscount;

TEST(Doubles, SeventeenDigitsRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(100.0), "100");
    EXPECT_EQ(format_double(-0.0), "0");
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-50.0, 50.0);
    for (int n = 0; n < 10000; ++n) {
        const double x = std::exp(d(rng)) * (n % 2 ? 1.0 : -1.0);
        ASSERT_EQ(parse_double(format_double(x)), x);
    }
}

TEST(Doubles, ParseRejectsGarbage) {
    EXPECT_EQ(parse_double(" 2.5\r"), 2.5);
    EXPECT_EQ(parse_double("+1e3"), 1000.0);
    EXPECT_THROW(parse_double(""), FormatError);
    EXPECT_THROW(parse_double("1,5"), FormatError);
    EXPECT_THROW(parse_double("12abc"), FormatError);
}

TEST(SpecJson, RoundTrip) {
    const ModelSpec plain = ModelSpec::hyperbolic(100.0, 0.1);
    EXPECT_EQ(spec_from_json(spec_to_json(plain)), plain);
    const ModelSpec rich = ModelSpec::perceived(3.5, 0.123456789, -0.25, TimePerception{0.3, 1.7, 0.05, 0.2});
    EXPECT_EQ(spec_from_json(json::parse(spec_to_json(rich).dump())), rich);
    EXPECT_FALSE(spec_to_json(plain).contains("s"));
}

TEST(SpecJson, ExampleDocument) {
    const ModelSpec s = spec_from_json(json::parse(R"({"v0":100.0,"k":0.1,"q":1.0,"s":0.0,"a":1.0,"b":1.0,"c":0.0})"));
    EXPECT_EQ(s.v0, 100.0);
    ASSERT_TRUE(s.time);
    EXPECT_EQ(s.time->b, 1.0);
}

TEST(SpecJson, Errors) {
    EXPECT_THROW(spec_from_json(json::parse("[1,2]")), FormatError);
    EXPECT_THROW(spec_from_json(json::parse(R"({"v0":1,"k":0.1})")), FormatError);
    EXPECT_THROW(spec_from_json(json::parse(R"({"v0":1,"k":0.1,"q":"one"})")), FormatError);
    EXPECT_THROW(spec_from_json(json::parse(R"({"v0":1,"k":0.1,"q":1,"s":0})")), FormatError);
    EXPECT_THROW(spec_from_json(json::parse(R"({"v0":1,"k":0.1,"q":1,"z":0})")), FormatError);
    EXPECT_THROW(spec_from_json(json::parse(R"({"v0":-1,"k":0.1,"q":1})")), FormatError);
    EXPECT_THROW(read_spec_file("/nonexistent/spec.json"), FormatError);
}

TEST(DatasetCsv, RoundTrip) {
    const IndifferenceDataset d{10.0, {{1.0, 9.1}, {2.5, 0.30000000000000004}, {365.0, 1e-9}}};
    std::stringstream ss;
    write_dataset_csv(ss, d);
    EXPECT_EQ(ss.str().substr(0, 12), "delay,value\n");
    EXPECT_EQ(read_dataset_csv(ss, 10.0), d);
}

TEST(DatasetCsv, AcceptsCrlf) {
    std::istringstream in("delay,value\r\n1,5\r\n2,4\r\n");
    const IndifferenceDataset d = read_dataset_csv(in, 10.0);
    ASSERT_EQ(d.points.size(), 2u);
    EXPECT_EQ(d.points[1].value, 4.0);
}

TEST(DatasetCsv, Errors) {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_dataset_csv(in, 10.0);
    };
    EXPECT_THROW(read(""), FormatError);
    EXPECT_THROW(read("1,5\n2,4\n"), FormatError);
    EXPECT_THROW(read("Delay,Value\n1,5\n"), FormatError);
    EXPECT_THROW(read("delay,value\n1;5\n"), FormatError);
    EXPECT_THROW(read("delay,value\n1,5,6\n"), FormatError);
    EXPECT_THROW(read("delay,value\n1,x\n"), FormatError);
    EXPECT_THROW(read("delay,value\n2,5\n1,6\n"), FormatError);
    EXPECT_THROW(read("delay,value\n1,50\n"), FormatError);
    EXPECT_THROW(read("delay,value\n"), FormatError);
}

TEST(TraceJsonl, RoundTripProperty) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int n = 0; n < 200; ++n) {
        TitrationTrace tr;
        tr.delay = u(rng);
        for (int c = 0; c < n % 17; ++c) tr.choices.push_back({u(rng), c % 3 == 0});
        tr.v_d = u(rng);
        tr.v_s = u(rng);
        tr.indifference = 0.5 * (tr.v_d + tr.v_s);
        std::stringstream ss;
        const TitrationTrace one[] = {tr};
        write_traces_jsonl(ss, one);
        std::string line;
        std::getline(ss, line);
        ASSERT_EQ(trace_from_json(json::parse(line)), tr);
        std::string rest;
        ASSERT_FALSE(std::getline(ss, rest));
    }
}

TEST(TraceJsonl, Keys) {
    const json j = trace_to_json({2.0, {{1.5, true}}, 1.5, 1.0, 1.25});
    for (const char* key : {"delay", "choices", "v_d", "v_s", "indifference"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["choices"][0]["chose_immediate"], true);
    EXPECT_THROW(trace_from_json(json::parse(R"({"delay":1})")), FormatError);
}

TEST(Curve, HyperbolicThreeSamples) {
    const std::vector<CurveSample> rows = sample_curve(ModelSpec::hyperbolic(100.0, 0.1), 0.0, 10.0, 3);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].t, 0.0);
    EXPECT_EQ(rows[1].t, 5.0);
    EXPECT_EQ(rows[2].t, 10.0);
    EXPECT_EQ(rows[0].v, 100.0);
    EXPECT_NEAR(rows[1].v, 200.0 / 3.0, 1e-12);
    EXPECT_EQ(rows[2].v, 50.0);
}

TEST(Curve, IncIsSumOfTerms) {
    const ModelSpec spec = ModelSpec::perceived(10.0, 0.4, 0.7, TimePerception::unified(0.35, 1.1, 0.2));
    for (const CurveSample& r : sample_curve(spec, 0.0, 200.0, 101))
        ASSERT_LE(std::abs(r.inc - (r.inc_value_term + r.inc_time_term)),
                  1e-12 * (std::abs(r.inc_value_term) + std::abs(r.inc_time_term)));
}

TEST(Curve, CsvAndJsonShapes) {
    const std::vector<CurveSample> rows = sample_curve(ModelSpec::exponential(1.0, 0.5), 1.0, 2.0, 2);
    std::ostringstream out;
    write_curve_csv(out, rows);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,v,i,inc,inc_value_term,inc_time_term");
    const json j = curve_to_json(rows);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[1]["t"], 2.0);
    EXPECT_THROW(sample_curve(ModelSpec::exponential(1.0, 0.5), 2.0, 1.0, 3), DomainError);
    EXPECT_THROW(sample_curve(ModelSpec::exponential(1.0, 0.5), 0.0, 1.0, 0), DomainError);
}

TEST(FitResultJson, ErrorAndSuccessShapes) {
    FitResult failed;
    failed.family = ModelFamily::QUnified;
    failed.error = "boom";
    const json jf = fit_result_to_json(failed);
    EXPECT_EQ(jf["family"], "q-unified");
    EXPECT_EQ(jf["error"], "boom");
    EXPECT_FALSE(jf.contains("rss"));

    const IndifferenceDataset d{10.0, {{1.0, 9.0}, {2.0, 8.2}, {4.0, 6.9}}};
    const json js = fit_result_to_json(fit_model(d, ModelFamily::ExpWeberFechner));
    EXPECT_TRUE(js["params"].contains("g"));
    EXPECT_TRUE(js["params"].contains("b"));
    EXPECT_TRUE(js["spec"].contains("s"));
}
