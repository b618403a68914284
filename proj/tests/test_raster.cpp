#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"
#include "evoshape/raster.hpp"
#include "evoshape/rng.hpp"
#include "support/reference_raster.hpp"

using namespace evoshape;
using evoshape_test::ref_render;

namespace {

Image random_image(int h, int w, RandomStream& rng) {
  std::vector<double> data(static_cast<std::size_t>(h) * w * 3);
  for (auto& v : data) v = rng.uniform_real(0.0, 1.0);
  return Image(h, w, std::move(data));
}

Genome circle1(std::vector<double> row) { return Genome(ShapeKind::Circle, 1, std::move(row)); }

} // namespace

TEST_CASE("scaled_round maps genome entries to pixel indices", "[raster]") {
  CHECK(scaled_round(0.5, 32) == 16);
  CHECK(scaled_round(1.0, 32) == 31); // clamped from 32
  CHECK(scaled_round(0.0, 32) == 0);
  CHECK(scaled_round(0.015, 32) == 0);  // 0.48 rounds down
  CHECK(scaled_round(0.0157, 32) == 1); // 0.5024 rounds up
}

TEST_CASE("composite blends covered pixels only", "[raster]") {
  const Image x(4, 4, 0.2);

  SECTION("alpha zero is the identity") {
    RasterShape s{{{1, 1}, {2, 2}}, {0.9, 0.9, 0.9}, 0.0};
    CHECK(composite(x, s) == x);
  }
  SECTION("alpha one overwrites") {
    RasterShape s{{{0, 0}}, {1.0, 0.0, 0.0}, 1.0};
    const Image out = composite(x, s);
    CHECK(out.at(0, 0, 0) == 1.0);
    CHECK(out.at(0, 0, 1) == 0.0);
    CHECK(out.at(0, 0, 2) == 0.0);
    CHECK(out.at(0, 1, 0) == 0.2);
  }
  SECTION("half alpha lands midway") {
    RasterShape s{{{3, 3}}, {1.0, 1.0, 1.0}, 0.5};
    const Image out = composite(x, s);
    for (int ch = 0; ch < 3; ++ch)
      CHECK_THAT(out.at(3, 3, ch), Catch::Matchers::WithinAbs(0.6, 1e-15));
  }
  SECTION("out-of-bounds region is rejected") {
    RasterShape s{{{4, 0}}, {1.0, 1.0, 1.0}, 1.0};
    CHECK_THROWS_AS(composite(x, s), std::invalid_argument);
  }
}

TEST_CASE("project_linf clips into the ball and the domain", "[raster]") {
  CHECK(project_linf_value(0.5, 0.5, 0.05) == 0.5);
  CHECK_THAT(project_linf_value(0.9, 0.5, 0.05), Catch::Matchers::WithinAbs(0.55, 1e-15));
  CHECK(project_linf_value(1.2, 0.98, 0.05) == 1.0); // [0,1] binds before x+eps
  CHECK_THAT(project_linf_value(0.1, 0.5, 0.05), Catch::Matchers::WithinAbs(0.45, 1e-15));
  CHECK(project_linf_value(-0.5, 0.02, 0.05) == 0.0);

  RandomStream rng(5);
  const Image x = random_image(8, 8, rng);
  CHECK(project_linf(x, x, 0.05) == x);
  CHECK_THROWS_AS(project_linf(x, Image(8, 9, 0.0), 0.05), std::invalid_argument);
}

TEST_CASE("single circle on a black canvas", "[raster]") {
  const Image x(32, 32, 0.0);
  const Genome g = circle1({0.5, 0.5, 1.0, 1.0, 0.0, 0.0, 1.0});
  const Image out = render_circles(g, x, 1.0, 12.0);

  // center (16,16), radius round(64/12) = 5
  int painted = 0;
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const bool inside = (r - 16) * (r - 16) + (c - 16) * (c - 16) <= 25;
      if (inside) ++painted;
      CHECK(out.at(r, c, 0) == (inside ? 1.0 : 0.0));
      CHECK(out.at(r, c, 1) == 0.0);
      CHECK(out.at(r, c, 2) == 0.0);
    }
  CHECK(painted > 0);
  CHECK(out == ref_render(g, x, 1.0, 12.0));

  SECTION("epsilon clips the same composite") {
    const Image clipped = render_circles(g, x, 0.05, 12.0);
    CHECK(clipped == project_linf(out, x, 0.05));
    CHECK(clipped == ref_render(g, x, 0.05, 12.0));
  }
}

TEST_CASE("zero-alpha genome renders to the original image", "[raster]") {
  RandomStream rng(9);
  const Image x = random_image(16, 16, rng);
  for (double eps : {0.01, 0.3, 1.0}) {
    Genome g = Genome::random(ShapeKind::Circle, 5, rng);
    std::vector<double> vals = g.values();
    for (int i = 0; i < g.num_shapes(); ++i) vals[static_cast<std::size_t>(i) * 7 + 6] = 0.0;
    CHECK(render_circles(Genome(ShapeKind::Circle, 5, vals), x, eps, 12.0) == x);
  }
}

TEST_CASE("degenerate triangle covers at most its single pixel", "[raster]") {
  const Image x(16, 16, 0.0);
  const Genome g(ShapeKind::Triangle, 1,
                 {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.0, 1.0, 0.0, 1.0});
  const Image out = render_triangles(g, x, 1.0);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      CHECK(out.at(r, c, 1) == ((r == 8 && c == 8) ? 1.0 : 0.0));
  CHECK(out == ref_render(g, x, 1.0, 12.0));
}

TEST_CASE("two opaque triangles split the image and cover it fully", "[raster]") {
  const Image x(16, 16, 1.0);
  // upper-left and lower-right halves, boundary inclusive on the diagonal
  const Genome g(ShapeKind::Triangle, 2,
                 {0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
                  1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  const Image out = render_triangles(g, x, 1.0);
  CHECK(out == Image(16, 16, 0.0));
}

TEST_CASE("rectangles honor degenerate and full extents", "[raster]") {
  SECTION("equal corners paint one pixel") {
    const Image x(16, 16, 0.0);
    const Genome g(ShapeKind::Rectangle, 1, {0.25, 0.75, 0.75, 0.25, 1.0, 1.0, 1.0, 1.0});
    const Image out = render_rectangles(g, x, 1.0);
    int painted = 0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c)
        if (out.at(r, c, 0) != 0.0) ++painted;
    CHECK(painted == 1);
    CHECK(out.at(4, 12, 0) == 1.0); // rows from entries 0/3, cols from 1/2
  }
  SECTION("extreme corners cover everything") {
    const Image x(16, 16, 0.0);
    const Genome g(ShapeKind::Rectangle, 1, {0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(render_rectangles(g, x, 1.0) == Image(16, 16, 1.0));
  }
}

TEST_CASE("compositing order is a layered semantic", "[raster]") {
  const Image x(16, 16, 0.0);
  // two overlapping opaque rectangles with different colors
  const std::vector<double> red = {0.2, 0.2, 0.8, 0.8, 1.0, 0.0, 0.0, 1.0};
  const std::vector<double> blue = {0.3, 0.3, 0.9, 0.9, 0.0, 0.0, 1.0, 1.0};
  std::vector<double> ab = red, ba = blue;
  ab.insert(ab.end(), blue.begin(), blue.end());
  ba.insert(ba.end(), red.begin(), red.end());
  const Image red_then_blue = render_rectangles(Genome(ShapeKind::Rectangle, 2, ab), x, 1.0);
  const Image blue_then_red = render_rectangles(Genome(ShapeKind::Rectangle, 2, ba), x, 1.0);
  CHECK(red_then_blue != blue_then_red);
}

TEST_CASE("renderers reject mismatched genome kinds", "[raster]") {
  RandomStream rng(2);
  const Image x(8, 8, 0.0);
  const Genome circles = Genome::random(ShapeKind::Circle, 2, rng);
  const Genome triangles = Genome::random(ShapeKind::Triangle, 2, rng);
  CHECK_THROWS_AS(render_triangles(circles, x, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(render_rectangles(circles, x, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(render_circles(triangles, x, 0.05, 12.0), std::invalid_argument);
}

TEST_CASE("optimized renderers match the whole-image reference", "[raster]") {
  RandomStream rng(1234);
  for (ShapeKind kind : {ShapeKind::Circle, ShapeKind::Triangle, ShapeKind::Rectangle}) {
    for (int rep = 0; rep < 60; ++rep) {
      const int h = rng.uniform_int(0, 1) ? 16 : 32;
      const int w = rng.uniform_int(0, 1) ? 16 : 32;
      const Image x = random_image(h, w, rng);
      const int n = rng.uniform_int(1, 10);
      const Genome g = Genome::random(kind, n, rng);
      const double eps = std::vector<double>{0.01, 0.05, 0.3, 1.0}[rng.uniform_int(0, 3)];
      const Image fast = render(g, x, eps, 12.0);
      const Image slow = ref_render(g, x, eps, 12.0);
      REQUIRE(fast == slow);
    }
  }
}

TEST_CASE("rendering is pure and stays inside the constraint set", "[raster]") {
  RandomStream rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const ShapeKind kind = std::vector<ShapeKind>{
        ShapeKind::Circle, ShapeKind::Triangle, ShapeKind::Rectangle}[rng.uniform_int(0, 2)];
    const Image x = random_image(16, 16, rng);
    const Genome g = Genome::random(kind, rng.uniform_int(1, 6), rng);
    const double eps = std::vector<double>{0.01, 0.05, 0.3}[rng.uniform_int(0, 2)];
    const Image out = render(g, x, eps, 12.0);
    REQUIRE(linf_distance(out, x) <= eps + 1e-9);
    for (double v : out.data()) REQUIRE((v >= 0.0 && v <= 1.0));
    REQUIRE(render(g, x, eps, 12.0) == out);
  }
}
