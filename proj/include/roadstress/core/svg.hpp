// Copyright 2026 The roadstress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal horizontal bar chart writer.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace roadstress {

struct Bar {
  std::string label;
  double value = 0.0;
  bool highlight = false;
};

inline std::string xml_escape(const std::string& s) {
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

// `threshold` draws a vertical dashed line, e.g. the frame budget.
inline std::string bar_chart_svg(const std::string& title, const std::string& unit,
                                 const std::vector<Bar>& bars, std::optional<double> threshold = {}) {
  const int label_w = 200, plot_w = 520, row_h = 18, top = 40;
  const int height = top + row_h * static_cast<int>(bars.size()) + 40;
  double vmax = threshold.value_or(0.0);
  for (const Bar& b : bars) vmax = std::max(vmax, b.value);
  if (vmax <= 0.0) vmax = 1.0;
  vmax *= 1.1;
  auto xpos = [&](double v) { return label_w + plot_w * v / vmax; };
  char buf[256];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << label_w + plot_w + 80 << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"10\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Bar& b = bars[i];
    const int y = top + row_h * static_cast<int>(i);
    std::snprintf(buf, sizeof buf, "%.2f", b.value);
    os << "<text x=\"" << label_w - 6 << "\" y=\"" << y + 12 << "\" text-anchor=\"end\">"
       << xml_escape(b.label) << "</text>\n";
    os << "<rect x=\"" << label_w << "\" y=\"" << y + 2 << "\" width=\"" << xpos(b.value) - label_w
       << "\" height=\"" << row_h - 4 << "\" fill=\"" << (b.highlight ? "#c0392b" : "#2e86c1") << "\"/>\n";
    os << "<text x=\"" << xpos(b.value) + 4 << "\" y=\"" << y + 12 << "\">" << buf << "</text>\n";
  }
  if (threshold) {
    const double x = xpos(*threshold);
    std::snprintf(buf, sizeof buf, "%.1f %s", *threshold, unit.c_str());
    os << "<line x1=\"" << x << "\" y1=\"" << top - 4 << "\" x2=\"" << x << "\" y2=\"" << height - 30
       << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << x + 4 << "\" y=\"" << height - 16 << "\">" << xml_escape(buf) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace roadstress
