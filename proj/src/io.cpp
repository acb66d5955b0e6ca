#include "fracstab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracstab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? p : buf);
}

cplx parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  auto fail = [&] { return std::invalid_argument("not a complex number: '" + std::string(text) + "'"); };
  if (s.empty()) throw fail();
  const bool imag_only = s.back() == 'i' || s.back() == 'j';
  const std::string_view body = imag_only ? s.substr(0, s.size() - 1) : s;

  double v = 0.0;
  if (!imag_only) {
    if (!parse_double(body, v)) throw fail();
    return {v, 0.0};
  }
  // split at the last sign that is not part of an exponent and not leading
  std::size_t split_at = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    double x;
    if (!parse_double(t, x)) throw fail();
    return x;
  };
  if (split_at == std::string_view::npos) return {0.0, imag_part(body)};
  double re;
  if (!parse_double(body.substr(0, split_at), re)) throw fail();
  return {re, imag_part(body.substr(split_at))};
}

std::string format_complex(cplx v) {
  if (v.imag() == 0.0) return format_double(v.real());
  std::string im = format_double(v.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(v.real()) + im + "i";
}

std::map<std::string, std::string> CsvTable::config() const {
  std::map<std::string, std::string> out;
  for (const auto& c : comments) {
    const auto eq = c.find('=');
    if (eq == std::string::npos) continue;
    auto value = trim(std::string_view(c).substr(eq + 1));
    // string values are echoed quoted
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out[std::string(trim(std::string_view(c).substr(0, eq)))] = std::string(value);
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw IoError("missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (const auto& c : t.comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view l = trim(line);
    if (l.empty()) continue;
    if (l.front() == '#') {
      t.comments.emplace_back(trim(l.substr(1)));
      continue;
    }
    const auto fields = split(l, ',');
    if (!have_header) {
      for (auto f : fields) t.columns.emplace_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) + " fields");
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        throw IoError("line " + std::to_string(lineno) + ": bad number '" + std::string(fields[i]) + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (is.bad()) throw IoError("read failure");
  if (!have_header) throw IoError("no CSV header");
  return t;
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  t.columns = {"n", "re", "im"};
  t.rows.reserve(traj.values.size());
  for (std::size_t n = 0; n < traj.values.size(); ++n) {
    t.rows.push_back({static_cast<double>(n), traj.values[n].real(), traj.values[n].imag()});
  }
  return t;
}

CsvTable boundary_table(const BoundaryCurve& curve) {
  CsvTable t;
  t.columns = {"theta", "re", "im"};
  t.rows.reserve(curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    t.rows.push_back({curve.thetas[i], curve.points[i].real(), curve.points[i].imag()});
  }
  return t;
}

std::vector<cplx> trajectory_values(const CsvTable& table) {
  const std::size_t re = table.column("re"), im = table.column("im");
  std::vector<cplx> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.emplace_back(r[re], r[im]);
  return out;
}

void write_svg(std::ostream& os, const BoundaryCurve& curve, const SvgOptions& o) {
  const bool fill = o.winding && o.nx > 0 && o.ny > 0;
  const Box box = fill ? o.box : bounding_box(curve, 0.05);
  const double scale = o.width / (box.x1 - box.x0);
  const double height = (box.y1 - box.y0) * scale;
  auto px = [&](double x) { return format_double((x - box.x0) * scale); };
  auto py = [&](double y) { return format_double((box.y1 - y) * scale); };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (std::string c : o.comments) {
    // "--" may not appear inside an XML comment
    for (auto p = c.find("--"); p != std::string::npos; p = c.find("--", p)) c.replace(p, 2, "- -");
    os << "<!-- " << c << " -->\n";
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_double(o.width)
     << "\" height=\"" << format_double(height) << "\" viewBox=\"0 0 " << format_double(o.width) << ' '
     << format_double(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (fill) {
    const double dx = (box.x1 - box.x0) / static_cast<double>(o.nx);
    const double dy = (box.y1 - box.y0) / static_cast<double>(o.ny);
    const std::string w = format_double(dx * scale), h = format_double(dy * scale);
    os << "<path fill=\"#2b7bba\" fill-opacity=\"0.4\" stroke=\"none\" d=\"";
    for (std::size_t j = 0; j < o.ny; ++j) {
      for (std::size_t i = 0; i < o.nx; ++i) {
        if ((*o.winding)[j * o.nx + i] != o.fill_winding) continue;
        const double x = box.x0 + static_cast<double>(i) * dx;
        const double y = box.y0 + static_cast<double>(j + 1) * dy;
        os << 'M' << px(x) << ' ' << py(y) << 'h' << w << 'v' << h << "h-" << w << 'z';
      }
    }
    os << "\"/>\n";
  }

  // real axis for orientation
  if (box.y0 < 0.0 && box.y1 > 0.0) {
    os << "<line x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"" << format_double(o.width) << "\" y2=\"" << py(0.0)
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  }
  os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    os << (i ? 'L' : 'M') << px(curve.points[i].real()) << ' ' << py(curve.points[i].imag());
  }
  os << "\"/>\n</svg>\n";
}

OutputTarget::OutputTarget(const std::string& path, std::ostream& fallback) : path_(path), os_(&fallback) {
  if (path.empty() || path == "-") return;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw IoError("cannot open '" + path + "' for writing");
  os_ = f.get();
  file_ = std::move(f);
}

void OutputTarget::close() {
  os_->flush();
  if (!*os_) throw IoError("write to '" + (path_.empty() ? std::string("stdout") : path_) + "' failed");
  if (file_) {
    static_cast<std::ofstream&>(*file_).close();
    if (!*file_) throw IoError("closing '" + path_ + "' failed");
  }
}

}  // namespace fracstab
