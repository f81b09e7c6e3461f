#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "goalassign/world.hpp"

namespace goalassign {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RenderStyle {
  int cell_px = 32;
  Rgb background{255, 255, 255};
  Rgb grid_line{190, 190, 190};
  Rgb border{60, 60, 60};
  Rgb obstacle{0, 0, 0};
  Rgb goal{220, 30, 30};
  Rgb agent{30, 70, 220};
  Rgb label{255, 255, 255};
  Rgb cell_index{150, 150, 150};
  Rgb diagonal_blocker{255, 140, 0};
  int label_scale = 2;  // multiples of the 5x7 glyph
  bool annotate_cells = true;
  bool emphasize_border = true;
  bool diagonal_blockers = true;

  // Throws ConfigError.
  void check() const;
};

// Decoded raster; the PNG encoder and tests both work on this.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  Rgb at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct DiagonalBlocker {
  int corner_row = 0;  // grid-line coordinates of the shared corner
  int corner_col = 0;
  friend bool operator==(const DiagonalBlocker&, const DiagonalBlocker&) = default;
};

// Every corner where two obstacles touch only diagonally.
std::vector<DiagonalBlocker> diagonal_blockers(const Scenario& scenario);

Image rasterize(const Scenario& scenario, const std::vector<Position>& positions, const RenderStyle& style = {});
std::vector<std::uint8_t> encode_png(const Image& image);
std::vector<std::uint8_t> render_image(const Scenario& scenario, const std::vector<Position>& positions,
                                       const RenderStyle& style = {});

// '#' obstacle, 'A'.. goal, '1'..'9' agent ('*' when k > 9), '.' empty.
std::string render_ascii(const Scenario& scenario, const std::vector<Position>& positions);

struct ChartPoint {
  double x = 0;
  double y = 0;
};

struct ChartSeries {
  std::string label;
  std::vector<ChartPoint> points;
};

struct ChartLabels {
  std::string title = "Performance gap by number of agents";
  std::string x_axis = "Number of agents";
  std::string y_axis = "Mean steps above optimal";
};

std::string chart_svg(const std::vector<ChartSeries>& series, const ChartLabels& labels = {});
void render_chart(const std::vector<ChartSeries>& series, const std::filesystem::path& path,
                  const ChartLabels& labels = {});

// Width and height in pixels of text drawn with the built-in font.
int text_width(std::string_view text, int scale);
inline int text_height(int scale) { return 7 * scale; }

}  // namespace goalassign
