#include "shapeclust/svg.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace shapeclust {

void write_histogram_svg(const std::map<int, int>& histogram, const std::string& path,
                         const std::string& title) {
  if (histogram.empty()) throw std::invalid_argument("histogram svg: empty histogram");
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");

  const int width = 480, height = 320;
  const int left = 48, right = 16, top = 36, bottom = 40;
  const int plot_w = width - left - right;
  const int plot_h = height - top - bottom;

  int max_count = 1;
  for (const auto& [k, count] : histogram) max_count = std::max(max_count, count);
  const int bars = static_cast<int>(histogram.size());
  const int slot = plot_w / bars;
  const int bar_w = std::max(4, slot * 7 / 10);

  file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  file << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  file << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\">"
       << title << "</text>\n";

  // axes
  file << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
       << top + plot_h << "\" stroke=\"black\"/>\n";
  file << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
       << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

  // y ticks at 0, max/2, max
  for (int tick = 0; tick <= 2; ++tick) {
    const int value = max_count * tick / 2;
    const int y = top + plot_h - plot_h * tick / 2;
    file << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
         << "\" stroke=\"black\"/>\n";
    file << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << value
         << "</text>\n";
  }

  int index = 0;
  for (const auto& [k, count] : histogram) {
    const int h = count * plot_h / max_count;
    const int x = left + index * slot + (slot - bar_w) / 2;
    const int y = top + plot_h - h;
    file << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\"" << h
         << "\" fill=\"#4878a8\"/>\n";
    file << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << top + plot_h + 16
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << k
         << "</text>\n";
    ++index;
  }
  file << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 8
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">clusters</text>\n";
  file << "</svg>\n";
}

}  // namespace shapeclust
