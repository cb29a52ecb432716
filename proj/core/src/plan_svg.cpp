// Copyright 2026 The otsum Authors
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

#include <algorithm>
#include <cmath>

#include "otsum/error.hpp"
#include "otsum/pipeline.hpp"

namespace otsum {

namespace {

constexpr int kCell = 24;
constexpr int kMargin = 120;  // label gutter left of and above the grid

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

}  // namespace

void render_plan_svg(const TransportPlan& plan,
                     std::span<const std::string> source_labels,
                     std::span<const std::string> target_labels,
                     std::ostream& out) {
  const Eigen::Index rows = plan.flows.rows();
  const Eigen::Index cols = plan.flows.cols();
  if (static_cast<Eigen::Index>(source_labels.size()) != rows ||
      static_cast<Eigen::Index>(target_labels.size()) != cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                "label count does not match plan dimensions");
  }
  const long width = kMargin + static_cast<long>(cols) * kCell;
  const long height = kMargin + static_cast<long>(rows) * kCell;
  const double max_flow = plan.flows.size() > 0 ? plan.flows.maxCoeff() : 0.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<g font-family=\"monospace\" font-size=\"11\">\n";
  for (Eigen::Index j = 0; j < cols; ++j) {
    const long x = kMargin + j * kCell + kCell / 2 + 4;
    const long y = kMargin - 6;
    out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"start\" "
        << "transform=\"rotate(-90 " << x << ' ' << y << ")\">"
        << escape_xml(target_labels[static_cast<std::size_t>(j)]) << "</text>\n";
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    out << "<text x=\"" << (kMargin - 6) << "\" y=\""
        << (kMargin + i * kCell + kCell / 2 + 4) << "\" text-anchor=\"end\">"
        << escape_xml(source_labels[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  out << "</g>\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double flow = plan.flows(i, j);
      const int level =
          max_flow > 0.0
              ? static_cast<int>(std::lround(255.0 * (flow / max_flow)))
              : 0;
      const int shade = 255 - std::clamp(level, 0, 255);
      out << "<rect x=\"" << (kMargin + j * kCell) << "\" y=\""
          << (kMargin + i * kCell) << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"rgb(" << shade << ',' << shade << ',' << shade
          << ")\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace otsum
