#include "glomap/plot.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <string>

using namespace glomap;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("plot") {

TEST_CASE("one circle per point, one group per panel") {
  Rng rng(1);
  std::vector<PlotPanel> panels;
  for (int k = 0; k < 4; ++k) {
    PlotPanel p;
    p.z = oracle::random_matrix(25, 2, rng);
    p.title = "epoch " + std::to_string(k);
    ColorColumn c;
    for (int i = 0; i < 25; ++i) c.values.push_back(i % 3);
    p.color = c;
    panels.push_back(p);
  }
  const std::string svg = render_svg(panels);
  CHECK(svg.find("<svg xmlns") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<circle") == 100);
  CHECK(count(svg, "<g>") == 4);
  CHECK(svg.find("epoch 3") != std::string::npos);
  CHECK(svg.find(categorical_color(2)) != std::string::npos);
  CHECK(render_svg(panels) == svg);
}

TEST_CASE("without a color column all points share one color") {
  Rng rng(2);
  PlotPanel p;
  p.z = oracle::random_matrix(10, 2, rng);
  const std::string svg = render_svg(std::span<const PlotPanel>(&p, 1));
  CHECK(count(svg, "<circle") == 10);
  std::string first;
  std::size_t pos = 0;
  for (int i = 0; i < 10; ++i) {
    pos = svg.find("<circle", pos);
    const std::size_t f = svg.find("fill=\"", pos) + 6;
    const std::string color = svg.substr(f, 7);
    if (i == 0) first = color;
    CHECK(color == first);
    ++pos;
  }
}

TEST_CASE("palettes") {
  CHECK(categorical_color(0) == categorical_color(20));
  CHECK(categorical_color(0) != categorical_color(1));
  CHECK(continuous_color(0.0) != continuous_color(1.0));
  CHECK(continuous_color(-1.0) == continuous_color(0.0));
  CHECK(continuous_color(0.5).size() == 7);
}

TEST_CASE("non-two-dimensional panels are rejected") {
  Rng rng(3);
  PlotPanel p;
  p.z = oracle::random_matrix(5, 3, rng);
  CHECK_THROWS_AS(render_svg(std::span<const PlotPanel>(&p, 1)), Error);
}

}  // TEST_SUITE
