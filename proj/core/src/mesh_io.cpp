#include "gamow/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gamow {

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

}  // namespace

Boundary read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw InvalidInput("OFF: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw InvalidInput("OFF: missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!next_content_line(in, line)) throw InvalidInput("OFF: missing counts");
    std::istringstream counts(line);
    counts >> nv >> nf >> ne;
  } else {
    header >> nf >> ne;
  }
  if (nv <= 0 || nf <= 0) throw InvalidInput("OFF: invalid vertex/face counts");
  std::vector<Vec3> pts;
  pts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw InvalidInput("OFF: truncated vertex list");
    std::istringstream row(line);
    Vec3 p;
    if (!(row >> p.x() >> p.y() >> p.z()))
      throw InvalidInput("OFF: malformed vertex row " + std::to_string(i));
    pts.push_back(p);
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line)) throw InvalidInput("OFF: truncated face list");
    std::istringstream row(line);
    int k = 0;
    std::array<int, 3> t{};
    if (!(row >> k) || k != 3)
      throw InvalidInput("OFF: only triangular faces are supported (face " + std::to_string(f) +
                         ")");
    if (!(row >> t[0] >> t[1] >> t[2]))
      throw InvalidInput("OFF: malformed face row " + std::to_string(f));
    tris.push_back(t);
  }
  return Boundary::surface(std::move(pts), std::move(tris));
}

Boundary read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open mesh file: " + path);
  return read_off(in);
}

void write_off(std::ostream& out, const Boundary& b) {
  if (b.dimension() != 3) throw InvalidInput("OFF output requires a surface (n = 3)");
  out << "OFF\n" << b.vertex_count() << ' ' << b.element_count() << " 0\n";
  for (const auto& p : b.vertices())
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z())
        << '\n';
  for (const auto& el : b.elements()) out << "3 " << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
}

Boundary read_curve_csv(std::istream& in) {
  std::string line;
  std::vector<Vec3> pts;
  std::vector<long> loops;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw InvalidInput("curve CSV: expected x,y[,loop] rows");
    try {
      std::size_t used = 0;
      const double x = std::stod(cells[0], &used);
      const double y = std::stod(cells[1]);
      const long loop = cells.size() > 2 ? std::stol(cells[2]) : 0;
      pts.emplace_back(x, y, 0.0);
      loops.push_back(loop);
    } catch (const std::exception&) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw InvalidInput("curve CSV: malformed row '" + line + "'");
    }
    first = false;
  }
  if (pts.size() < 3) throw InvalidInput("curve CSV: need at least three vertices");
  std::vector<std::array<int, 2>> segs;
  std::size_t start = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool last = i + 1 == pts.size() || loops[i + 1] != loops[i];
    if (last) {
      if (i - start + 1 < 3) throw InvalidInput("curve CSV: loop with fewer than three vertices");
      for (std::size_t k = start; k < i; ++k)
        segs.push_back({static_cast<int>(k), static_cast<int>(k + 1)});
      segs.push_back({static_cast<int>(i), static_cast<int>(start)});
      start = i + 1;
    }
  }
  return Boundary::curve(std::move(pts), std::move(segs));
}

Boundary read_curve_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open curve file: " + path);
  return read_curve_csv(in);
}

void write_curve_csv(std::ostream& out, const Boundary& b) {
  if (b.dimension() != 2) throw InvalidInput("curve CSV output requires n = 2");
  // Walk each loop from its smallest vertex id.
  std::vector<int> next(b.vertex_count(), -1);
  for (const auto& el : b.elements()) next[el[0]] = el[1];
  std::vector<bool> seen(b.vertex_count(), false);
  out << "x,y,loop\n";
  int loop = 0;
  for (std::size_t s = 0; s < b.vertex_count(); ++s) {
    if (seen[s]) continue;
    int v = static_cast<int>(s);
    while (!seen[v]) {
      seen[v] = true;
      out << format_double(b.vertex(v).x()) << ',' << format_double(b.vertex(v).y()) << ','
          << loop << '\n';
      v = next[v];
    }
    ++loop;
  }
}

Boundary read_boundary_file(const std::string& path) {
  const auto ext = extension(path);
  if (ext == "off") return read_off_file(path);
  if (ext == "csv") return read_curve_csv_file(path);
  throw InvalidInput("unknown mesh extension (expected .off or .csv): " + path);
}

void write_boundary_file(const std::string& path, const Boundary& b) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write mesh file: " + path);
  if (b.dimension() == 3) write_off(out, b);
  else write_curve_csv(out, b);
}

}  // namespace gamow
