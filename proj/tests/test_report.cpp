#include <doctest.h>

#include <cstdio>
#include <string>

#include "lorentz/report.hpp"

using namespace lorentz;

TEST_CASE("format helpers") {
  CHECK(format_g15(0.5) == "0.5");
  CHECK(format_g15(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_exponent(kInf) == "inf");
  CHECK(format_exponent(2.0) == "2");
}

TEST_CASE("Csv emits a config comment line and RFC 4180 body") {
  Csv csv("demo a=1");
  csv.row({"x", "y"});
  csv.row({"plain", "with,comma"});
  csv.row({"quote\"inside", "line\nbreak"});
  std::string text = csv.str();
  CHECK(text.substr(0, 10) == "# lorentz ");
  CHECK(text.find("| demo a=1\r\n") != std::string::npos);
  CHECK(text.find("x,y\r\n") != std::string::npos);
  CHECK(text.find("plain,\"with,comma\"\r\n") != std::string::npos);
  CHECK(text.find("\"quote\"\"inside\",\"line\nbreak\"\r\n") != std::string::npos);
}

TEST_CASE("bernstein and growth tables carry the pinned columns") {
  WidthReport w{2, 0.5, Eigen::VectorXd::Ones(2), 0.25, 99, 8, 120};
  BernsteinCurve curve{{w},
                       khintchine_estimate(2.0, 1.0, 2, KhMethod::exhaustive_signs),
                       khintchine_estimate(2.0, kInf, 2, KhMethod::exhaustive_signs),
                       0.25};
  OptimConfig cfg;
  cfg.seed = 99;
  cfg.restarts = 8;
  std::string csv = bernstein_csv(curve, 2.0, 1.0, kInf, cfg);
  CHECK(csv.find("n,value,alpha_bound,seed,restarts\r\n") != std::string::npos);
  CHECK(csv.find("r=inf") != std::string::npos);
  CHECK(csv.find("2,0.5,0.25,99,8\r\n") != std::string::npos);

  GrowthCurve gc{2.0, {{1, 1.0, 1.0}, {2, 1.5, 1.2}}, {0.7, 0.1, 0.99, 2}};
  std::string gcsv = growth_csv(gc, 2.0, 1.0);
  CHECK(gcsv.find("count,norm_pq,norm_pr\r\n") != std::string::npos);
  CHECK(gcsv.find("2,1.5,1.2\r\n") != std::string::npos);
}

TEST_CASE("file io round-trips and reports missing files") {
  std::string path = "test_report_tmp.txt";
  write_file(path, "payload\n");
  CHECK(read_file(path) == "payload\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("no_such_file_here.txt"), io_error);
}

TEST_CASE("json objects keep documented keys") {
  TransferReport r{1.0, 1.5, 0.5, 2.0, true, true, 0.1, 0.2};
  nlohmann::ordered_json j = to_json_obj(r);
  CHECK(j.begin().key() == "seq_norm");
  CHECK(j["upper_const"] == 2.0);
  CHECK(j["lower_ok"] == true);

  KhintchineEstimate est = khintchine_estimate(2.0, 2.0, 2, KhMethod::exhaustive_signs);
  nlohmann::ordered_json jk = to_json_obj(est);
  CHECK(jk.contains("c_low_witness"));
  CHECK(jk.contains("method"));
}

TEST_CASE("svg chart escapes labels and draws every series") {
  SvgSeries s1{"a & b", {1.0, 2.0, 3.0}, {1.0, 4.0, 9.0}};
  SvgSeries s2{"<c>", {1.0, 2.0, 3.0}, {2.0, 2.0, 2.0}};
  std::string svg = svg_line_chart("squares & lines", "n", "value", {s1, s2});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("squares &amp; lines") != std::string::npos);
  CHECK(svg.find("a &amp; b") != std::string::npos);
  CHECK(svg.find("&lt;c&gt;") != std::string::npos);
  CHECK(svg.rfind("</svg>") != std::string::npos);
  // one polyline per series
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++count;
  CHECK(count == 2);

  CHECK_THROWS_AS(svg_line_chart("t", "x", "y", {SvgSeries{"s", {-1.0, 1.0}, {1.0, 2.0}}}, true),
                  std::exception);
}
