#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "gamow/flow.hpp"
#include "gamow/measures.hpp"
#include "local_fit.hpp"

namespace gamow {

namespace {

std::uint64_t key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Triangle soup with a directed-edge index, edited in place.
class Editor {
 public:
  Editor(const Boundary& b) : ref_(b), fits_(detail::local_fits(b)) {
    points_.assign(b.vertices().begin(), b.vertices().end());
    for (const auto& e : b.elements()) faces_.push_back({e[0], e[1], e[2]});
    alive_.assign(faces_.size(), true);
    vertex_alive_.assign(points_.size(), true);
    for (const auto& f : fits_) normals_.push_back(f.normal());
    homes_.resize(points_.size());
    std::iota(homes_.begin(), homes_.end(), 0);
    for (std::size_t f = 0; f < faces_.size(); ++f) index_face(static_cast<int>(f));
  }

  std::vector<Vec3> points_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<bool> alive_, vertex_alive_;
  const Boundary& ref_;
  std::vector<detail::LocalFit> fits_;
  std::vector<Vec3> normals_;
  std::vector<int> homes_;  // nearest input vertex
  std::unordered_map<std::uint64_t, int> edge_face_;

  void index_face(int f) {
    const auto& t = faces_[f];
    for (int a = 0; a < 3; ++a) edge_face_[key(t[a], t[(a + 1) % 3])] = f;
  }
  void unindex_face(int f) {
    const auto& t = faces_[f];
    for (int a = 0; a < 3; ++a) edge_face_.erase(key(t[a], t[(a + 1) % 3]));
  }
  int face_of(int a, int b) const {
    auto it = edge_face_.find(key(a, b));
    return it == edge_face_.end() ? -1 : it->second;
  }
  int opposite(int f, int a, int b) const {
    for (int v : faces_[f])
      if (v != a && v != b) return v;
    return -1;
  }
  Vec3 face_normal(const std::array<int, 3>& t) const {
    return (points_[t[1]] - points_[t[0]]).cross(points_[t[2]] - points_[t[0]]);
  }

  std::vector<std::vector<int>> one_rings() const {
    std::vector<std::vector<int>> ring(points_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!alive_[f]) continue;
      for (int a = 0; a < 3; ++a) ring[faces_[f][a]].push_back(faces_[f][(a + 1) % 3]);
    }
    return ring;
  }

  std::vector<std::array<int, 2>> edges() const {
    std::vector<std::array<int, 2>> out;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!alive_[f]) continue;
      for (int a = 0; a < 3; ++a) {
        const int u = faces_[f][a], v = faces_[f][(a + 1) % 3];
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  // Cubic Hermite midpoint of edge (a, b) using the vertex normals.
  Vec3 curved_midpoint(int a, int b) const {
    const Vec3 e = points_[b] - points_[a];
    const double len = e.norm();
    auto tangent = [&](const Vec3& n) {
      Vec3 t = e - e.dot(n) * n;
      const double tn = t.norm();
      return tn > 0.0 ? Vec3(t * (len / tn)) : e;
    };
    return 0.5 * (points_[a] + points_[b]) + (tangent(normals_[a]) - tangent(normals_[b])) / 8.0;
  }

  // Moves v onto the fitted input surface near its home vertex.
  void snap(int v) {
    int h = homes_[v];
    double best = (ref_.vertex(h) - points_[v]).squaredNorm();
    for (bool moved = true; moved;) {
      moved = false;
      for (int w : ref_.neighbors(h)) {
        const double d = (ref_.vertex(w) - points_[v]).squaredNorm();
        if (d < best) {
          best = d;
          h = w;
          moved = true;
        }
      }
    }
    homes_[v] = h;
    points_[v] = fits_[h].project(points_[v], &normals_[v]);
  }

  bool split(int a, int b) {
    const int f = face_of(a, b), g = face_of(b, a);
    if (f < 0 || g < 0) return false;
    const int c = opposite(f, a, b), d = opposite(g, b, a);
    const int m = static_cast<int>(points_.size());
    points_.push_back(curved_midpoint(a, b));
    normals_.push_back((normals_[a] + normals_[b]).normalized());
    homes_.push_back(homes_[a]);
    vertex_alive_.push_back(true);
    snap(m);
    unindex_face(f);
    unindex_face(g);
    faces_[f] = {a, m, c};
    faces_[g] = {b, m, d};
    faces_.push_back({m, b, c});
    faces_.push_back({m, a, d});
    alive_.push_back(true);
    alive_.push_back(true);
    index_face(f);
    index_face(g);
    index_face(static_cast<int>(faces_.size()) - 2);
    index_face(static_cast<int>(faces_.size()) - 1);
    return true;
  }

  // Faces around v, from the edge index.
  std::vector<int> star(int v, const std::vector<std::vector<int>>& ring) const {
    std::vector<int> out;
    for (int w : ring[v]) {
      const int f = face_of(v, w);
      if (f >= 0) out.push_back(f);
    }
    return out;
  }
};

void smooth(Editor& ed, int passes) {
  for (int pass = 0; pass < passes; ++pass) {
    const auto ring = ed.one_rings();
    std::vector<Vec3> next = ed.points_;
    for (std::size_t v = 0; v < ed.points_.size(); ++v) {
      if (!ed.vertex_alive_[v] || ring[v].empty()) continue;
      Vec3 c = Vec3::Zero();
      for (int w : ring[v]) c += ed.points_[w];
      c /= static_cast<double>(ring[v].size());
      const Vec3& n = ed.normals_[v];
      Vec3 d = c - ed.points_[v];
      d -= d.dot(n) * n;
      next[v] = ed.points_[v] + 0.5 * d;
    }
    ed.points_ = std::move(next);
    for (std::size_t v = 0; v < ed.points_.size(); ++v)
      if (ed.vertex_alive_[v]) ed.snap(static_cast<int>(v));
  }
}

bool try_collapse(Editor& ed, int a, int b, double max_len,
                  const std::vector<std::vector<int>>& ring, std::vector<bool>& touched) {
  const int f = ed.face_of(a, b), g = ed.face_of(b, a);
  if (f < 0 || g < 0) return false;
  const int c = ed.opposite(f, a, b), d = ed.opposite(g, b, a);
  // Link condition: the only common neighbors are c and d.
  std::vector<int> na(ring[a].begin(), ring[a].end()), nb(ring[b].begin(), ring[b].end());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  std::vector<int> common;
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
  if (common.size() != 2) return false;
  if (ring[c].size() <= 3 || ring[d].size() <= 3) return false;
  if (ring[a].size() + ring[b].size() - 4 < 3) return false;

  const Vec3 target = 0.5 * (ed.points_[a] + ed.points_[b]);
  for (int w : nb)
    if ((ed.points_[w] - target).norm() > max_len) return false;
  for (int w : na)
    if ((ed.points_[w] - target).norm() > max_len) return false;

  // Faces around b (other than f, g) get b -> a; reject normal flips.
  std::vector<int> moved;
  for (int v : {a, b})
    for (int h : ed.star(v, ring))
      if (h != f && h != g) moved.push_back(h);
  std::sort(moved.begin(), moved.end());
  moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
  for (int h : moved) {
    auto t = ed.faces_[h];
    const Vec3 before = ed.face_normal(t);
    for (int& v : t)
      if (v == b) v = a;
    Vec3 saved = ed.points_[a];
    ed.points_[a] = target;
    const Vec3 after = ed.face_normal(t);
    ed.points_[a] = saved;
    if (after.dot(before) <= 0.2 * before.norm() * after.norm()) return false;
  }

  ed.unindex_face(f);
  ed.unindex_face(g);
  ed.alive_[f] = ed.alive_[g] = false;
  for (int h : moved) ed.unindex_face(h);
  for (int h : moved)
    for (int& v : ed.faces_[h])
      if (v == b) v = a;
  for (int h : moved) ed.index_face(h);
  ed.points_[a] = target;
  ed.snap(a);
  ed.vertex_alive_[b] = false;
  for (int v : {a, b, c, d}) touched[v] = true;
  for (int w : na) touched[w] = true;
  for (int w : nb) touched[w] = true;
  return true;
}

bool try_flip(Editor& ed, int a, int b, std::vector<int>& valence) {
  const int f = ed.face_of(a, b), g = ed.face_of(b, a);
  if (f < 0 || g < 0) return false;
  const int c = ed.opposite(f, a, b), d = ed.opposite(g, b, a);
  if (c == d || ed.face_of(c, d) >= 0 || ed.face_of(d, c) >= 0) return false;
  if (valence[a] <= 3 || valence[b] <= 3) return false;
  auto dev = [](int v) { return (v - 6) * (v - 6); };
  const int before = dev(valence[a]) + dev(valence[b]) + dev(valence[c]) + dev(valence[d]);
  const int after =
      dev(valence[a] - 1) + dev(valence[b] - 1) + dev(valence[c] + 1) + dev(valence[d] + 1);
  if (after >= before) return false;
  const std::array<int, 3> t1{c, d, b}, t2{d, c, a};
  const Vec3 n0 = ed.face_normal(ed.faces_[f]) + ed.face_normal(ed.faces_[g]);
  const Vec3 n1 = ed.face_normal(t1), n2 = ed.face_normal(t2);
  const double ref = n0.norm();
  if (n1.dot(n0) <= 0.5 * n1.norm() * ref || n2.dot(n0) <= 0.5 * n2.norm() * ref) return false;
  ed.unindex_face(f);
  ed.unindex_face(g);
  ed.faces_[f] = t1;
  ed.faces_[g] = t2;
  ed.index_face(f);
  ed.index_face(g);
  --valence[a];
  --valence[b];
  ++valence[c];
  ++valence[d];
  return true;
}

Boundary rebuild(const Editor& ed) {
  std::vector<int> remap(ed.points_.size(), -1);
  std::vector<Vec3> pts;
  for (std::size_t f = 0; f < ed.faces_.size(); ++f) {
    if (!ed.alive_[f]) continue;
    for (int v : ed.faces_[f])
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(pts.size());
        pts.push_back(ed.points_[v]);
      }
  }
  std::vector<std::array<int, 3>> tris;
  for (std::size_t f = 0; f < ed.faces_.size(); ++f)
    if (ed.alive_[f])
      tris.push_back({remap[ed.faces_[f][0]], remap[ed.faces_[f][1]], remap[ed.faces_[f][2]]});
  return Boundary::surface(std::move(pts), std::move(tris));
}

Boundary remesh_surface(const Boundary& b, const RemeshOptions& opts) {
  const double L = opts.target_edge > 0.0 ? opts.target_edge : b.mean_edge_length();
  const double high = 4.0 / 3.0 * L, low = 4.0 / 5.0 * L;
  Editor ed(b);
  for (int iter = 0; iter < opts.iterations; ++iter) {
    // Splits, longest first.
    auto edges = ed.edges();
    std::vector<std::pair<double, std::array<int, 2>>> longs;
    for (const auto& e : edges) {
      const double len = (ed.points_[e[0]] - ed.points_[e[1]]).norm();
      if (len > high) longs.push_back({len, e});
    }
    std::sort(longs.begin(), longs.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    for (const auto& [len, e] : longs) ed.split(e[0], e[1]);

    // Collapses, shortest first, one per neighborhood per sweep.
    edges = ed.edges();
    std::vector<std::pair<double, std::array<int, 2>>> shorts;
    for (const auto& e : edges) {
      const double len = (ed.points_[e[0]] - ed.points_[e[1]]).norm();
      if (len < low) shorts.push_back({len, e});
    }
    std::sort(shorts.begin(), shorts.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    {
      const auto ring = ed.one_rings();
      std::vector<bool> touched(ed.points_.size(), false);
      for (const auto& [len, e] : shorts) {
        if (touched[e[0]] || touched[e[1]]) continue;
        try_collapse(ed, e[0], e[1], high, ring, touched);
      }
    }

    // Valence-improving flips.
    {
      std::vector<int> valence(ed.points_.size(), 0);
      for (std::size_t f = 0; f < ed.faces_.size(); ++f)
        if (ed.alive_[f])
          for (int v : ed.faces_[f]) ++valence[v];
      for (const auto& e : ed.edges()) try_flip(ed, e[0], e[1], valence);
    }

    smooth(ed, opts.smoothing_passes);
  }
  return rebuild(ed);
}

Boundary remesh_curve(const Boundary& b) {
  // Equidistribute arc length on each loop, keeping the vertex count.
  const auto n = b.vertex_count();
  std::vector<int> next(n, -1);
  for (const auto& e : b.elements()) next[e[0]] = e[1];
  std::vector<bool> seen(n, false);
  std::vector<Vec3> pts(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> loop;
    for (int v = static_cast<int>(s); !seen[v]; v = next[v]) {
      seen[v] = true;
      loop.push_back(v);
    }
    const std::size_t m = loop.size();
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      cum[i + 1] = cum[i] + (b.vertex(loop[(i + 1) % m]) - b.vertex(loop[i])).norm();
    const double total = cum[m];
    std::size_t seg = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double target = total * static_cast<double>(i) / static_cast<double>(m);
      while (seg + 1 < m && cum[seg + 1] < target) ++seg;
      const double t = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
      pts[loop[i]] = (1.0 - t) * b.vertex(loop[seg]) + t * b.vertex(loop[(seg + 1) % m]);
    }
  }
  return b.with_vertices(std::move(pts));
}

}  // namespace

RemeshResult remesh(const Boundary& b, const RemeshOptions& opts) {
  RemeshResult out{b, false, {}};
  const double target = volume(b);
  try {
    Boundary r = b.dimension() == 3 ? remesh_surface(b, opts) : remesh_curve(b);
    const Vec3 c = centroid(r);
    r = r.scaled(std::pow(target / volume(r), 1.0 / b.dimension()), c);
    out.boundary = std::move(r);
    out.changed = true;
  } catch (const Error& e) {
    out.warning = std::string("remesh rejected, original kept: ") + e.what();
  }
  return out;
}

}  // namespace gamow
