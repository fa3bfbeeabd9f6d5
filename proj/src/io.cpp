#include "ppwave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ppwave/errors.hpp"

namespace ppwave {

namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string short_num(double v) { return num(v, "%.6g"); }

const Eigen::VectorXd& species_of(const Field1D& f, char species) {
  switch (species) {
    case 'u': return f.u;
    case 'v': return f.v;
    case 'w': return f.w;
  }
  throw std::invalid_argument("species must be one of u, v, w");
}

struct Rgb {
  double r, g, b;
};

// compact viridis-like ramp
Rgb colormap(double t) {
  static const Rgb stops[] = {{0.267, 0.005, 0.329},
                              {0.231, 0.322, 0.545},
                              {0.129, 0.567, 0.551},
                              {0.369, 0.788, 0.382},
                              {0.993, 0.906, 0.144}};
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * 4.0;
  const int i = std::min(3, static_cast<int>(s));
  const double f = s - i;
  return {stops[i].r + f * (stops[i + 1].r - stops[i].r),
          stops[i].g + f * (stops[i + 1].g - stops[i].g),
          stops[i].b + f * (stops[i + 1].b - stops[i].b)};
}

std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(255 * std::clamp(c.r, 0.0, 1.0))),
                static_cast<int>(std::lround(255 * std::clamp(c.g, 0.0, 1.0))),
                static_cast<int>(std::lround(255 * std::clamp(c.b, 0.0, 1.0))));
  return buf;
}

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 70, kRight = 30, kTop = 46, kBottom = 56;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

void svg_open(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"26\" font-family=\"sans-serif\" font-size=\"16\""
      << " text-anchor=\"middle\">" << title << "</text>\n";
}

void svg_axes(std::ostringstream& out, const std::string& xlabel, const std::string& ylabel,
              double x0, double x1, double y0, double y1) {
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\""
      << kPlotH << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 14
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + kPlotH / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 18 " << kTop + kPlotH / 2 << ")\">" << ylabel << "</text>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 36
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << short_num(x0)
      << "</text>\n";
  out << "<text x=\"" << kLeft + kPlotW << "\" y=\"" << kHeight - 36
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << short_num(x1)
      << "</text>\n";
  out << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + kPlotH + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << short_num(y0)
      << "</text>\n";
  out << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << short_num(y1)
      << "</text>\n";
}

void svg_polyline(std::ostringstream& out, const std::vector<double>& xs,
                  const std::vector<double>& ys, double x0, double x1, double y0, double y1,
                  const char* color) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  const double xr = (x1 > x0) ? x1 - x0 : 1.0;
  const double yr = (y1 > y0) ? y1 - y0 : 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = kLeft + (xs[i] - x0) / xr * kPlotW;
    const double py = kTop + kPlotH - (ys[i] - y0) / yr * kPlotH;
    out << num(px, "%.2f") << "," << num(py, "%.2f") << " ";
  }
  out << "\"/>\n";
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,u,v,w\n";
  for (const auto& ev : traj.events)
    out << "# event t=" << num(ev.time) << " tag=" << ev.tag << "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const OdeState& s = traj.states[i];
    out << num(traj.times[i]) << "," << num(s[0]) << "," << num(s[1]) << "," << num(s[2]) << "\n";
  }
  return out.str();
}

std::string profile_csv(const ProfileTrajectory& traj) {
  std::ostringstream out;
  out << "t,x1,x2,y,z\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const ProfileState& s = traj.states[i];
    out << num(traj.times[i]) << "," << num(s[0]) << "," << num(s[1]) << "," << num(s[2]) << ","
        << num(s[3]) << "\n";
  }
  return out.str();
}

std::string species_csv(const SpaceTimeRecord& rec, char species) {
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < rec.grid.n_cells; ++i) out << "," << short_num(rec.grid.cell_center(i));
  out << "\n";
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    out << num(rec.times[k]);
    const Eigen::VectorXd& a = species_of(rec.snapshots[k], species);
    for (Eigen::Index i = 0; i < a.size(); ++i) out << "," << num(a[i]);
    out << "\n";
  }
  return out.str();
}

std::string front_csv(const FrontTrace& tr) {
  std::ostringstream out;
  out << "t,front_position\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    out << num(tr.times[i]) << "," << num(tr.positions[i]) << "\n";
  return out.str();
}

std::string heatmap_svg(const SpaceTimeRecord& rec, char species, const std::string& title) {
  if (rec.times.empty()) throw std::invalid_argument("empty record");
  std::ostringstream out;

  double vmax = 0;
  for (const auto& snap : rec.snapshots)
    vmax = std::max(vmax, species_of(snap, species).maxCoeff());
  if (vmax <= 0) vmax = 1;

  const std::size_t max_rows = 160;
  const std::size_t row_stride = std::max<std::size_t>(1, rec.times.size() / max_rows);
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < rec.times.size(); k += row_stride) rows.push_back(k);
  if (rows.back() + 1 != rec.times.size()) rows.push_back(rec.times.size() - 1);

  const int max_cols = 400;
  const int col_stride = std::max(1, rec.grid.n_cells / max_cols);
  std::vector<int> cols;
  for (int i = 0; i < rec.grid.n_cells; i += col_stride) cols.push_back(i);

  svg_open(out, title + " (max " + short_num(vmax) + ")");
  const double cw = kPlotW / cols.size();
  const double ch = kPlotH / rows.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Eigen::VectorXd& a = species_of(rec.snapshots[rows[r]], species);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Rgb color = colormap(a[cols[c]] / vmax);
      out << "<rect x=\"" << num(kLeft + c * cw, "%.2f") << "\" y=\"" << num(kTop + r * ch, "%.2f")
          << "\" width=\"" << num(cw + 0.5, "%.2f") << "\" height=\"" << num(ch + 0.5, "%.2f")
          << "\" fill=\"" << hex_color(color) << "\"/>\n";
    }
  }
  svg_axes(out, "x", "t (downward)", 0, rec.grid.length, rec.times.back(), rec.times.front());
  out << "</svg>\n";
  return out.str();
}

std::string snapshot_svg(const Grid1D& g, const Field1D& f, const std::string& title) {
  std::ostringstream out;
  std::vector<double> xs(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) xs[i] = g.cell_center(i);

  double ymax = 0;
  for (const auto* a : {&f.u, &f.v, &f.w}) ymax = std::max(ymax, a->maxCoeff());
  if (ymax <= 0) ymax = 1;
  ymax *= 1.05;

  svg_open(out, title);
  svg_axes(out, "x", "density", 0, g.length, 0, ymax);
  const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
  const char* names[3] = {"u", "v", "w"};
  const Eigen::VectorXd* arrays[3] = {&f.u, &f.v, &f.w};
  for (int s = 0; s < 3; ++s) {
    std::vector<double> ys(arrays[s]->data(), arrays[s]->data() + arrays[s]->size());
    svg_polyline(out, xs, ys, 0, g.length, 0, ymax, colors[s]);
    out << "<text x=\"" << kLeft + kPlotW - 70 + 24 * s << "\" y=\"" << kTop + 16
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << colors[s] << "\">"
        << names[s] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string profile_svg(const ProfileTrajectory& traj, const std::string& title) {
  if (traj.times.empty()) throw std::invalid_argument("empty profile");
  std::ostringstream out;
  double ymax = 0;
  for (const auto& s : traj.states) ymax = std::max(ymax, s.maxCoeff());
  if (ymax <= 0) ymax = 1;
  ymax *= 1.05;

  svg_open(out, title);
  svg_axes(out, "wave variable", "component", traj.times.front(), traj.times.back(), 0, ymax);
  const char* colors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  const char* names[4] = {"x1", "x2", "y", "z"};
  for (int c = 0; c < 4; ++c) {
    std::vector<double> ys(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) ys[i] = traj.states[i][c];
    svg_polyline(out, traj.times, ys, traj.times.front(), traj.times.back(), 0, ymax, colors[c]);
    out << "<text x=\"" << kLeft + kPlotW - 100 + 26 * c << "\" y=\"" << kTop + 16
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << colors[c] << "\">"
        << names[c] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ppwave
