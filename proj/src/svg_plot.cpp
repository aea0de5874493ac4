// Copyright 2026 The Tetherplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tetherplan/svg_plot.hpp"

#include <algorithm>
#include <sstream>

namespace tetherplan {

namespace {

constexpr double kScale = 60.0;  // px per meter
constexpr double kMargin = 20.0;

struct Mapper {
  double height_px;
  double sx(double x) const { return kMargin + x * kScale; }
  double sz(double z) const { return height_px - kMargin - z * kScale; }
};

void polyline(std::ostringstream& out, const Mapper& m,
              const std::vector<Vec3>& pts, const char* style) {
  out << "  <polyline fill=\"none\" " << style << " points=\"";
  for (const Vec3& p : pts) {
    out << m.sx(p.x) << ',' << m.sz(p.z) << ' ';
  }
  out << "\"/>\n";
}

std::vector<Vec3> tether_polyline(const Vec3& anchor,
                                  const std::vector<Vec3>& contacts,
                                  const Vec3& uav) {
  std::vector<Vec3> pts{anchor};
  pts.insert(pts.end(), contacts.begin(), contacts.end());
  pts.push_back(uav);
  return pts;
}

}  // namespace

std::string render_slice_svg(const GridWorld& world, const PlanResult& plan,
                             const std::vector<LogRow>& log,
                             const Vec3& anchor) {
  const Vec3 ws = world.workspace_size();
  const double width = 2.0 * kMargin + ws.x * kScale + 220.0;  // legend space
  const double height = 2.0 * kMargin + ws.z * kScale;
  const Mapper m{height};

  const int layer = plan.path.states.back().cell.y;

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << std::max(height, 200.0) << "\">\n";
  out << "  <rect x=\"" << m.sx(0.0) << "\" y=\"" << m.sz(ws.z) << "\" width=\""
      << ws.x * kScale << "\" height=\"" << ws.z * kScale
      << "\" fill=\"#fafafa\" stroke=\"#333\"/>\n";

  // Obstacles in the slice layer.
  const double cs = world.cell_size();
  for (int x = 0; x < world.dims().x; ++x) {
    for (int z = 0; z < world.dims().z; ++z) {
      if (!world.is_occupied({x, layer, z})) continue;
      out << "  <rect x=\"" << m.sx(x * cs) << "\" y=\"" << m.sz((z + 1) * cs)
          << "\" width=\"" << cs * kScale << "\" height=\"" << cs * kScale
          << "\" fill=\"#c0392b\" fill-opacity=\"0.75\"/>\n";
    }
  }

  // Planned path.
  std::vector<Vec3> path_pts;
  for (const PathState& s : plan.path.states) path_pts.push_back(s.position);
  if (path_pts.size() > 1) {
    polyline(out, m, path_pts, "stroke=\"#8e44ad\" stroke-width=\"2\"");
  }
  for (const Vec3& p : path_pts) {
    out << "  <circle cx=\"" << m.sx(p.x) << "\" cy=\"" << m.sz(p.z)
        << "\" r=\"2.5\" fill=\"#8e44ad\"/>\n";
  }

  // Contact event counts from the executed log; snapshot polylines from the
  // planned waypoints, which carry full contact stacks.
  int pushes = 0, pops = 0;
  if (!log.empty()) {
    int prev = plan.path.states.front().tether.contact_count();
    for (const LogRow& r : log) {
      pushes += std::max(0, r.n_contacts - prev);
      pops += std::max(0, prev - r.n_contacts);
      prev = r.n_contacts;
    }
  }
  const std::size_t stride =
      std::max<std::size_t>(1, plan.path.size() / 6);
  for (std::size_t i = 0; i < plan.path.size(); i += stride) {
    const TetherState& t = plan.path.states[i].tether;
    polyline(out, m, tether_polyline(anchor, t.contacts(), t.uav()),
             "stroke=\"#999\" stroke-width=\"0.6\" stroke-dasharray=\"3,3\"");
  }
  // Final (planned) tether configuration with its contact points.
  const TetherState& final_tether = plan.path.states.back().tether;
  polyline(out, m,
           tether_polyline(anchor, final_tether.contacts(),
                           final_tether.uav()),
           "stroke=\"#111\" stroke-width=\"1.5\"");
  for (const Vec3& cp : final_tether.contacts()) {
    out << "  <circle cx=\"" << m.sx(cp.x) << "\" cy=\"" << m.sz(cp.z)
        << "\" r=\"4\" fill=\"#27ae60\"/>\n";
  }
  out << "  <circle cx=\"" << m.sx(anchor.x) << "\" cy=\"" << m.sz(anchor.z)
      << "\" r=\"4\" fill=\"#2980b9\"/>\n";

  // Legend.
  const double lx = 2.0 * kMargin + ws.x * kScale + 10.0;
  double ly = kMargin + 10.0;
  const auto legend_row = [&](const char* color, const std::string& text) {
    out << "  <rect x=\"" << lx << "\" y=\"" << ly - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "  <text x=\"" << lx + 18 << "\" y=\"" << ly + 1
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << text
        << "</text>\n";
    ly += 20.0;
  };
  legend_row("#c0392b", "obstacles (slice y=" + std::to_string(layer) + ")");
  legend_row("#8e44ad", "planned path");
  legend_row("#111111", "tether (final)");
  legend_row("#27ae60", "contact points");
  legend_row("#2980b9", "reel anchor");
  out << "  <text x=\"" << lx << "\" y=\"" << ly + 1
      << "\" font-size=\"12\" font-family=\"sans-serif\">contact events: "
      << pushes << " push, " << pops << " pop</text>\n";

  out << "</svg>\n";
  return out.str();
}

}  // namespace tetherplan
