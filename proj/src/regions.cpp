#include "fracstab/parallel.hpp"
#include "fracstab/stability.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <utility>
#include <vector>

namespace fracstab {

Box bounding_box(const BoundaryCurve& curve, double margin) {
  if (curve.points.empty()) throw std::invalid_argument("empty curve");
  Box b{curve.points[0].real(), curve.points[0].real(), curve.points[0].imag(), curve.points[0].imag()};
  for (const auto& p : curve.points) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  const double pad = margin * std::max(b.x1 - b.x0, b.y1 - b.y0);
  return {b.x0 - pad, b.x1 + pad, b.y0 - pad, b.y1 + pad};
}

std::vector<int> winding_grid(const BoundaryCurve& curve, const Box& box, std::size_t nx, std::size_t ny,
                              unsigned jobs, double boundary_margin) {
  std::vector<int> out(nx * ny, 0);
  const double dx = (box.x1 - box.x0) / static_cast<double>(nx);
  const double dy = (box.y1 - box.y0) / static_cast<double>(ny);
  const auto& p = curve.points;
  parallel_for(ny, jobs, [&](std::size_t j) {
    const double y = box.y0 + (static_cast<double>(j) + 0.5) * dy;
    if (boundary_margin > 0.0) {
      for (std::size_t i = 0; i < nx; ++i) {
        const cplx z(box.x0 + (static_cast<double>(i) + 0.5) * dx, y);
        const WindingResult w = winding_number(curve, z, boundary_margin);
        out[j * nx + i] = w.boundary ? INT_MIN : w.winding;
      }
      return;
    }
    // Without a margin the polyline's signed crossings of the row give every
    // cell's winding in one sweep: a cell counts the crossings to its right.
    std::vector<std::pair<double, int>> cross;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      const cplx a = p[k], b = p[k + 1];
      const bool up = a.imag() <= y && b.imag() > y;
      const bool down = a.imag() > y && b.imag() <= y;
      if (!up && !down) continue;
      const double x = a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      cross.emplace_back(x, up ? 1 : -1);
    }
    std::sort(cross.begin(), cross.end());
    int right = 0;
    for (const auto& c : cross) right += c.second;
    std::size_t next = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = box.x0 + (static_cast<double>(i) + 0.5) * dx;
      while (next < cross.size() && cross[next].first <= x) right -= cross[next++].second;
      out[j * nx + i] = right;
    }
  });
  return out;
}

std::size_t FaceCensus::count_winding(int w) const {
  return static_cast<std::size_t>(std::count_if(faces.begin(), faces.end(), [w](const Face& f) { return f.winding == w; }));
}

std::size_t FaceCensus::bounded_other(int target) const {
  return static_cast<std::size_t>(std::count_if(
      faces.begin(), faces.end(), [target](const Face& f) { return !f.unbounded && f.winding != target; }));
}

FaceCensus face_census(const BoundaryCurve& curve, std::size_t grid, double margin) {
  if (grid < 4) throw std::invalid_argument("face census grid too small");
  FaceCensus fc;
  fc.box = bounding_box(curve, margin);
  fc.nx = fc.ny = grid;
  const double dx = (fc.box.x1 - fc.box.x0) / static_cast<double>(grid);
  const double dy = (fc.box.y1 - fc.box.y0) / static_cast<double>(grid);
  fc.cell_face.assign(grid * grid, -2);  // -2 unvisited, -1 wall

  auto cell_of = [&](cplx p) {
    const auto ix = std::clamp<long>(static_cast<long>(std::floor((p.real() - fc.box.x0) / dx)), 0, static_cast<long>(grid) - 1);
    const auto iy = std::clamp<long>(static_cast<long>(std::floor((p.imag() - fc.box.y0) / dy)), 0, static_cast<long>(grid) - 1);
    return static_cast<std::size_t>(iy) * grid + static_cast<std::size_t>(ix);
  };
  // Walk every segment in steps under half a cell, so consecutive wall cells
  // are 8-adjacent and no 4-connected path can slip through.
  const auto& p = curve.points;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const cplx d = p[i + 1] - p[i];
    const double cells = std::max(std::abs(d.real()) / dx, std::abs(d.imag()) / dy);
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * cells)) + 1;
    for (std::size_t s = 0; s <= steps; ++s) {
      fc.cell_face[cell_of(p[i] + d * (static_cast<double>(s) / static_cast<double>(steps)))] = -1;
    }
  }

  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < fc.cell_face.size(); ++start) {
    if (fc.cell_face[start] != -2) continue;
    const int id = static_cast<int>(fc.faces.size());
    Face face;
    fc.cell_face[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      ++face.cells;
      const std::size_t ix = c % grid, iy = c / grid;
      if (ix == 0 || iy == 0 || ix == grid - 1 || iy == grid - 1) face.unbounded = true;
      auto visit = [&](std::size_t n) {
        if (fc.cell_face[n] == -2) {
          fc.cell_face[n] = id;
          queue.push_back(n);
        }
      };
      if (ix > 0) visit(c - 1);
      if (ix + 1 < grid) visit(c + 1);
      if (iy > 0) visit(c - grid);
      if (iy + 1 < grid) visit(c + grid);
    }
    const std::size_t sx = start % grid, sy = start / grid;
    face.sample = cplx(fc.box.x0 + (static_cast<double>(sx) + 0.5) * dx, fc.box.y0 + (static_cast<double>(sy) + 0.5) * dy);
    face.winding = winding_number(curve, face.sample, 0.0).winding;
    fc.faces.push_back(face);
  }
  return fc;
}

}  // namespace fracstab
