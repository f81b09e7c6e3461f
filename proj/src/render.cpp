#include "goalassign/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace goalassign {

void RenderStyle::check() const {
  if (cell_px < 8) throw ConfigError("render style: cell size must be at least 8 px");
  if (label_scale < 1) throw ConfigError("render style: label scale must be at least 1");
  const Rgb palette[] = {background, grid_line, border, obstacle, goal, agent, cell_index, diagonal_blocker};
  for (std::size_t i = 0; i < std::size(palette); ++i)
    for (std::size_t j = i + 1; j < std::size(palette); ++j)
      if (palette[i] == palette[j]) throw ConfigError("render style: palette entries must be distinct");
}

namespace {

// 5x7 glyphs, one byte per row, bit 4 is the leftmost column.
using Glyph = std::array<std::uint8_t, 7>;

const Glyph* glyph(char c) {
  static const std::map<char, Glyph> font = {
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {'A', {0x0E, 0x11, 0x11, 0x11, 0x1F, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
      {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
      {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
      {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
      {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
      {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
      {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
      {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
      {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
      {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
      {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
      {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
      {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
  };
  auto it = font.find(c);
  return it == font.end() ? nullptr : &it->second;
}

class Canvas {
 public:
  Canvas(int w, int h, Rgb fill) : img_{w, h, std::vector<Rgb>(static_cast<size_t>(w) * h, fill)} {}

  void put(int x, int y, Rgb c) {
    if (x >= 0 && y >= 0 && x < img_.width && y < img_.height) img_.pixels[static_cast<size_t>(y) * img_.width + x] = c;
  }
  void rect(int x0, int y0, int w, int h, Rgb c) {
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) put(x, y, c);
  }
  void disc(double cx, double cy, double r, Rgb c) {
    for (int y = static_cast<int>(cy - r) - 1; y <= static_cast<int>(cy + r) + 1; ++y)
      for (int x = static_cast<int>(cx - r) - 1; x <= static_cast<int>(cx + r) + 1; ++x) {
        double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
        if (dx * dx + dy * dy <= r * r) put(x, y, c);
      }
  }
  void diamond(int cx, int cy, int r, Rgb c) {
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (std::abs(dx) + std::abs(dy) <= r) put(cx + dx, cy + dy, c);
  }
  void text(int x, int y, std::string_view s, int scale, Rgb c) {
    for (char ch : s) {
      if (const Glyph* g = glyph(ch)) {
        for (int row = 0; row < 7; ++row)
          for (int col = 0; col < 5; ++col)
            if ((*g)[row] & (0x10 >> col)) rect(x + col * scale, y + row * scale, scale, scale, c);
      }
      x += 6 * scale;
    }
  }
  // Centred in the box, shrinking the scale until it fits.
  void label(int x0, int y0, int size, std::string_view s, int scale, Rgb c) {
    while (scale > 1 && (text_width(s, scale) > size - 4 || text_height(scale) > size - 4)) --scale;
    text(x0 + (size - text_width(s, scale)) / 2, y0 + (size - text_height(scale)) / 2, s, scale, c);
  }

  Image take() { return std::move(img_); }

 private:
  Image img_;
};

constexpr int kPad = 2;

}  // namespace

int text_width(std::string_view text, int scale) {
  return text.empty() ? 0 : static_cast<int>(text.size()) * 6 * scale - scale;
}

std::vector<DiagonalBlocker> diagonal_blockers(const Scenario& s) {
  std::vector<DiagonalBlocker> out;
  auto blocked = [&](int r, int c) { return s.is_obstacle({r, c}); };
  for (int r = 0; r + 1 < s.n; ++r)
    for (int c = 0; c + 1 < s.n; ++c) {
      const bool main = blocked(r, c) && blocked(r + 1, c + 1);
      const bool anti = blocked(r, c + 1) && blocked(r + 1, c);
      const bool sealed = main && anti;
      if ((main || anti) && !sealed) out.push_back({r + 1, c + 1});
    }
  return out;
}

Image rasterize(const Scenario& s, const std::vector<Position>& positions, const RenderStyle& style) {
  style.check();
  const int cell = style.cell_px;
  const int side = s.n * cell + 2 * kPad;
  Canvas canvas(side, side, style.background);
  auto x_of = [&](int col) { return kPad + col * cell; };
  auto y_of = [&](int row) { return kPad + row * cell; };

  for (int i = 0; i <= s.n; ++i) {
    canvas.rect(x_of(i), kPad, 1, s.n * cell, style.grid_line);
    canvas.rect(kPad, y_of(i), s.n * cell, 1, style.grid_line);
  }
  if (style.emphasize_border) {
    canvas.rect(0, 0, side, kPad, style.border);
    canvas.rect(0, side - kPad, side, kPad, style.border);
    canvas.rect(0, 0, kPad, side, style.border);
    canvas.rect(side - kPad, 0, kPad, side, style.border);
  }

  std::set<Position> occupied(s.obstacles.begin(), s.obstacles.end());
  occupied.insert(s.goals.begin(), s.goals.end());
  occupied.insert(positions.begin(), positions.end());
  if (style.annotate_cells) {
    for (int r = 0; r < s.n; ++r)
      for (int c = 0; c < s.n; ++c)
        if (!occupied.count({r, c})) canvas.text(x_of(c) + 3, y_of(r) + 3, std::to_string(s.cell_index({r, c})), 1, style.cell_index);
  }

  for (Position p : s.obstacles) canvas.rect(x_of(p.col) + 1, y_of(p.row) + 1, cell - 1, cell - 1, style.obstacle);

  const int inset = std::max(2, cell / 10);
  for (int j = 0; j < static_cast<int>(s.goals.size()); ++j) {
    Position p = s.goals[j];
    canvas.rect(x_of(p.col) + inset, y_of(p.row) + inset, cell - 2 * inset + 1, cell - 2 * inset + 1, style.goal);
    canvas.label(x_of(p.col), y_of(p.row), cell, goal_label(j), style.label_scale, style.label);
  }

  // Agents last so they stay visible when standing on a goal.
  for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
    Position p = positions[i];
    canvas.disc(x_of(p.col) + cell / 2.0 + 0.5, y_of(p.row) + cell / 2.0 + 0.5, cell * 0.42, style.agent);
    canvas.label(x_of(p.col), y_of(p.row), cell, std::to_string(i + 1), style.label_scale, style.label);
  }

  if (style.diagonal_blockers) {
    for (const auto& d : diagonal_blockers(s))
      canvas.diamond(x_of(d.corner_col), y_of(d.corner_row), std::max(2, cell / 6), style.diagonal_blocker);
  }
  return canvas.take();
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(image.width));
  put_u32(ihdr, static_cast<std::uint32_t>(image.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // 8-bit RGB, no interlace
  chunk(out, "IHDR", ihdr);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<size_t>(image.height) * (1 + 3 * image.width));
  for (int y = 0; y < image.height; ++y) {
    raw.push_back(0);  // filter: none
    for (int x = 0; x < image.width; ++x) {
      Rgb p = image.at(x, y);
      raw.insert(raw.end(), {p.r, p.g, p.b});
    }
  }
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(size);
  if (compress2(packed.data(), &size, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK)
    throw Error("png: deflate failed");
  packed.resize(size);
  chunk(out, "IDAT", packed);
  chunk(out, "IEND", {});
  return out;
}

std::vector<std::uint8_t> render_image(const Scenario& scenario, const std::vector<Position>& positions,
                                       const RenderStyle& style) {
  return encode_png(rasterize(scenario, positions, style));
}

std::string render_ascii(const Scenario& s, const std::vector<Position>& positions) {
  const int k = static_cast<int>(positions.size());
  const bool star = k > 9;
  std::vector<std::string> rows(static_cast<size_t>(s.n), std::string(static_cast<size_t>(s.n), '.'));
  auto at = [&](Position p) -> char& { return rows[p.row][p.col]; };

  for (Position p : s.obstacles)
    if (s.in_bounds(p)) at(p) = '#';
  for (int j = 0; j < static_cast<int>(s.goals.size()); ++j) {
    std::string label = goal_label(j);
    at(s.goals[j]) = label.size() == 1 ? label[0] : '+';
  }

  std::vector<std::string> legend;
  for (int i = 0; i < k; ++i) {
    Position p = positions[i];
    auto goal = std::find(s.goals.begin(), s.goals.end(), p);
    if (goal != s.goals.end())
      legend.push_back("agent " + std::to_string(i + 1) + " on goal " +
                       goal_label(static_cast<int>(goal - s.goals.begin())));
    at(p) = star ? '*' : static_cast<char>('1' + i);
    if (star)
      legend.push_back("* agent " + std::to_string(i + 1) + " at (" + std::to_string(p.row) + "," +
                       std::to_string(p.col) + ")");
  }
  if (s.goals.size() > 26) legend.push_back("+ goals past Z");

  std::string out;
  for (const auto& r : rows) out += r + '\n';
  for (const auto& line : legend) out += line + '\n';
  return out;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                         "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

}  // namespace

std::string chart_svg(const std::vector<ChartSeries>& series, const ChartLabels& labels) {
  if (series.empty()) throw ConfigError("chart: need at least one series");
  double x_min = 0, x_max = 0, y_max = 0, y_min = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.points.empty()) throw ConfigError("chart: series '" + s.label + "' has no points");
    for (const auto& p : s.points) {
      if (first) x_min = x_max = p.x, first = false;
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_max = std::max(y_max, p.y);
      y_min = std::min(y_min, p.y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  // Round the y range up to a whole number of ticks.
  const int y_ticks = 5;
  double y_top = y_max > 0 ? std::ceil(y_max * 1.1) : 1.0;
  double y_bottom = y_min < 0 ? std::floor(y_min * 1.1) : 0.0;

  const int width = 720, height = 440;
  const int left = 70, right = 190, top = 40, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return top + (y_top - y) / (y_top - y_bottom) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(labels.title) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
      << num(top + plot_h) << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << num(top + plot_h)
      << "\"/>\n</g>\n";
  std::set<double> xs;
  for (const auto& s : series)
    for (const auto& p : s.points) xs.insert(p.x);
  for (double x : xs) {
    svg << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(sx(x)) << "\" y2=\""
        << num(top + plot_h + 5) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + plot_h + 19) << "\" text-anchor=\"middle\">" << num(x)
        << "</text>\n";
  }
  for (int t = 0; t <= y_ticks; ++t) {
    double y = y_bottom + (y_top - y_bottom) * t / y_ticks;
    svg << "<line x1=\"" << left << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
        << num(sy(y)) << "\" stroke=\"#e5e5e5\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(y)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << escape(labels.x_axis) << "</text>\n"
      << "<text x=\"18\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(top + plot_h / 2) << ")\">" << escape(labels.y_axis) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kSeriesColors[i % std::size(kSeriesColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j)
      svg << (j ? " " : "") << num(sx(s.points[j].x)) << ',' << num(sy(s.points[j].y));
    svg << "\"/>\n";
    for (const auto& p : s.points)
      svg << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << width - right + 15 << "\" y1=\"" << num(ly) << "\" x2=\"" << width - right + 40
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << width - right + 46 << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_chart(const std::vector<ChartSeries>& series, const std::filesystem::path& path,
                  const ChartLabels& labels) {
  const std::string svg = chart_svg(series, labels);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write chart " + path.string());
  out << svg;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace goalassign
