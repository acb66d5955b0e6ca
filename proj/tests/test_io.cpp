#include "fracstab/dynamics.hpp"
#include "fracstab/io.hpp"
#include "fracstab/parallel.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace fracstab;

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("parse_complex accepts the usual spellings") {
  CHECK(parse_complex("1.891-0.624i") == cplx(1.891, -0.624));
  CHECK(parse_complex("2") == cplx(2.0, 0.0));
  CHECK(parse_complex("-2i") == cplx(0.0, -2.0));
  CHECK(parse_complex("0.3+4j") == cplx(0.3, 4.0));
  CHECK(parse_complex(" -0.08687-0.9862i ") == cplx(-0.08687, -0.9862));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_complex("1e-3+2e2i") == cplx(1e-3, 200.0));
  for (const char* bad : {"", "abc", "1+", "1+2", "1..2", "2ii"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_complex(bad), std::invalid_argument);
  }
  for (cplx v : {cplx(1.5, -0.25), cplx(-3.0, 0.0), cplx(0.0, 7.125), cplx(1e-300, -1e300)}) {
    CHECK(parse_complex(format_complex(v)) == v);
  }
}

TEST_CASE("CSV round trip keeps comments and values") {
  const auto traj = simulate_two_term(TwoTermSystem{{1.9, 0.2}, 2.0, LinearForcing{{1.891, -0.624}}}, 0.1, 0.2, 100);
  CsvTable t = trajectory_table(traj);
  t.comments = {"alpha=1.9", "a=2", "alpha=1.95"};
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  CHECK(back.columns == t.columns);
  CHECK(back.comments == t.comments);
  CHECK(back.config().at("alpha") == "1.95");
  const auto values = trajectory_values(back);
  REQUIRE(values.size() == traj.values.size());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i] == traj.values[i]);
  CHECK(back.column("im") == 2);
  CHECK_THROWS_AS(back.column("nope"), IoError);
}

TEST_CASE("malformed CSV is rejected") {
  std::istringstream empty("# only=comment\n");
  CHECK_THROWS_AS(read_csv(empty), IoError);
  std::istringstream ragged("n,re,im\n0,1\n");
  CHECK_THROWS_AS(read_csv(ragged), IoError);
  std::istringstream text("n,re,im\n0,x,1\n");
  CHECK_THROWS_AS(read_csv(text), IoError);
}

TEST_CASE("boundary table has one row per sample") {
  const auto curve = sample_boundary(OneTermFamily{0.55, 1}, 1024);
  const CsvTable t = boundary_table(curve);
  CHECK(t.columns == std::vector<std::string>{"theta", "re", "im"});
  CHECK(t.rows.size() == curve.points.size());
  CHECK(t.rows.back()[0] == curve.thetas.back());
}

TEST_CASE("SVG output is a single document with a path") {
  const auto curve = sample_boundary(TwoTermFamily{{1.9, 0.2}, 2.0}, 1024);
  const Box box = bounding_box(curve, 0.05);
  const auto w = winding_grid(curve, box, 40, 40);
  SvgOptions so;
  so.winding = &w;
  so.box = box;
  so.nx = so.ny = 40;
  so.comments = {"alpha=1.9", "odd -- comment"};
  std::ostringstream os;
  write_svg(os, curve, so);
  const std::string s = os.str();
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("fill-opacity=\"0.4\"") != std::string::npos);
  // "--" is not allowed inside XML comments
  const auto open = s.find("<!--");
  CHECK(s.find("--", open + 4) == s.find("-->", open + 4));
}

TEST_CASE("OutputTarget reports unwritable paths") {
  std::ostringstream fallback;
  CHECK_THROWS_AS(OutputTarget("/nonexistent-dir/x.csv", fallback), IoError);
  OutputTarget t("-", fallback);
  t.stream() << "hi";
  t.close();
  CHECK(fallback.str() == "hi");
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, 3, [](std::size_t i) { if (i == 17) throw std::runtime_error("x"); }),
                  std::runtime_error);
  CHECK(resolve_jobs(3u) == 3u);
  CHECK(resolve_jobs(std::nullopt) >= 1u);
}
