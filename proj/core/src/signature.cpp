#include <algorithm>
#include <cstdio>
#include <numeric>

#include "gutscat/error.hpp"
#include "gutscat/gi_decomposition.hpp"

namespace gutscat {

namespace {

// A face read from a start position in one direction.
struct Flag {
  int face = -1;
  int start = 0;
  int dir = 1;
};

int wrap(int x, int n) { return ((x % n) + n) % n; }

class Encoder {
 public:
  Encoder(const PatternedManifold& p, const std::vector<int>& component) : p_(p), component_(component) {
    const auto& cells = p.complex.cells();
    edge_faces_.resize(cells.size());
    for (int c : component_) {
      const auto& cell = cells[static_cast<std::size_t>(c)];
      auto& ef = edge_faces_[static_cast<std::size_t>(c)];
      for (int f = 0; f < static_cast<int>(cell.faces.size()); ++f) {
        const auto& vs = cell.faces[static_cast<std::size_t>(f)].verts;
        for (std::size_t k = 0; k < vs.size(); ++k) {
          const int u = vs[k], w = vs[(k + 1) % vs.size()];
          ef[{std::min(u, w), std::max(u, w)}].push_back(f);
        }
      }
    }
  }

  /// Encodes from a start flag, giving up as soon as the output exceeds
  /// best (when best is non-empty). Returns false on give-up.
  bool encode(int cell, Flag start, const std::vector<std::int64_t>& best, std::vector<std::int64_t>& out) {
    out.clear();
    best_ = &best;
    tied_ = !best.empty();
    cell_index_.assign(p_.complex.cells().size(), -1);
    local_.assign(p_.complex.cells().size(), {});
    label_.clear();
    order_.clear();
    discover(cell, start);
    for (std::size_t i = 0; i < order_.size(); ++i)
      if (!emit_cell(order_[i], out)) return false;
    return true;
  }

 private:
  struct Local {
    std::vector<Flag> flags;          // canonical order
    std::vector<int> index_of_face;   // face -> canonical index
    std::vector<std::vector<int>> adj;  // canonical index -> adjacent indices per edge
  };

  bool push(std::vector<std::int64_t>& out, std::int64_t x) {
    if (tied_) {
      const std::size_t i = out.size();
      if (i >= best_->size()) return false;  // longer than an equal prefix
      if (x > (*best_)[i]) return false;
      if (x < (*best_)[i]) tied_ = false;
    }
    out.push_back(x);
    return true;
  }

  int vertex_at(const PolyFace& f, const Flag& fl, int k) const {
    const int n = static_cast<int>(f.verts.size());
    return f.verts[static_cast<std::size_t>(wrap(fl.start + fl.dir * k, n))];
  }

  // Faces of a cell in breadth-first order from the entry flag; each
  // neighbour is read from the head of the shared edge, away from it.
  void discover(int c, Flag entry) {
    cell_index_[static_cast<std::size_t>(c)] = static_cast<int>(order_.size());
    order_.push_back(c);
    const auto& cell = p_.complex.cell(c);
    Local loc;
    loc.index_of_face.assign(cell.faces.size(), -1);
    loc.index_of_face[static_cast<std::size_t>(entry.face)] = 0;
    loc.flags.push_back(entry);
    for (std::size_t i = 0; i < loc.flags.size(); ++i) {
      const Flag fl = loc.flags[i];
      const auto& face = cell.faces[static_cast<std::size_t>(fl.face)];
      const int n = static_cast<int>(face.verts.size());
      std::vector<int> adj;
      for (int k = 0; k < n; ++k) {
        const int u = vertex_at(face, fl, k), w = vertex_at(face, fl, k + 1);
        const auto& fs = edge_faces_[static_cast<std::size_t>(c)].at({std::min(u, w), std::max(u, w)});
        int g = -1;
        for (int x : fs)
          if (x != fl.face) g = x;
        if (g < 0) throw InternalError("cell edge on a single face");
        if (loc.index_of_face[static_cast<std::size_t>(g)] < 0) {
          const auto& gv = cell.faces[static_cast<std::size_t>(g)].verts;
          const int m = static_cast<int>(gv.size());
          const int pos = static_cast<int>(std::find(gv.begin(), gv.end(), w) - gv.begin());
          const int dir = gv[static_cast<std::size_t>(wrap(pos + 1, m))] == u ? 1 : -1;
          loc.index_of_face[static_cast<std::size_t>(g)] = static_cast<int>(loc.flags.size());
          loc.flags.push_back({g, pos, dir});
        }
        adj.push_back(loc.index_of_face[static_cast<std::size_t>(g)]);
      }
      loc.adj.push_back(std::move(adj));
    }
    if (loc.flags.size() != cell.faces.size()) throw InternalError("cell faces not edge-connected");
    local_[static_cast<std::size_t>(c)] = std::move(loc);
  }

  bool emit_cell(int c, std::vector<std::int64_t>& out) {
    const auto& cell = p_.complex.cell(c);
    const auto& loc = local_[static_cast<std::size_t>(c)];
    if (!push(out, p_.cell_tag[static_cast<std::size_t>(c)]) || !push(out, static_cast<std::int64_t>(cell.faces.size())))
      return false;
    for (std::size_t i = 0; i < loc.flags.size(); ++i) {
      const auto& face = cell.faces[static_cast<std::size_t>(loc.flags[i].face)];
      if (!push(out, static_cast<std::int64_t>(face.verts.size())) || !push(out, static_cast<std::int64_t>(face.cls)))
        return false;
      for (int a : loc.adj[i])
        if (!push(out, a)) return false;
    }
    for (std::size_t i = 0; i < loc.flags.size(); ++i) {
      const Flag fl = loc.flags[i];
      const FaceRef ref{c, fl.face};
      const int g = p_.complex.gluing_at(ref);
      if (g < 0) {
        const auto it = p_.pattern.find(ref);
        int label = 0;
        if (it != p_.pattern.end()) {
          auto [lt, fresh] = label_.emplace(it->second, static_cast<int>(label_.size()) + 1);
          label = lt->second;
        }
        if (!push(out, 0) || !push(out, label)) return false;
        continue;
      }
      const auto [other, map] = p_.complex.across(g, ref);
      const int n = static_cast<int>(cell.faces[static_cast<std::size_t>(fl.face)].verts.size());
      const int m = static_cast<int>(map.size());
      const int start = map[static_cast<std::size_t>(fl.start)];
      const int next = map[static_cast<std::size_t>(wrap(fl.start + fl.dir, n))];
      const Flag induced{other.face, start, wrap(start + 1, m) == next ? 1 : -1};
      if (cell_index_[static_cast<std::size_t>(other.cell)] < 0) discover(other.cell, induced);
      const auto& oloc = local_[static_cast<std::size_t>(other.cell)];
      const int oi = oloc.index_of_face[static_cast<std::size_t>(other.face)];
      const Flag canon = oloc.flags[static_cast<std::size_t>(oi)];
      const int offset = wrap((induced.start - canon.start) * canon.dir, m);
      const int rel = induced.dir == canon.dir ? 1 : 0;
      if (!push(out, 1) || !push(out, static_cast<std::int64_t>(p_.complex.gluing(g).kind)) ||
          !push(out, cell_index_[static_cast<std::size_t>(other.cell)]) || !push(out, oi) || !push(out, offset) ||
          !push(out, rel))
        return false;
    }
    return true;
  }

  const PatternedManifold& p_;
  const std::vector<int>& component_;
  std::vector<std::map<std::pair<int, int>, std::vector<int>>> edge_faces_;
  const std::vector<std::int64_t>* best_ = nullptr;
  bool tied_ = false;
  std::vector<int> cell_index_;
  std::vector<Local> local_;
  std::map<int, int> label_;
  std::vector<int> order_;
};

std::vector<std::vector<int>> components(const PatternedManifold& p) {
  const int n = static_cast<int>(p.complex.cells().size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (const auto& g : p.complex.gluings()) {
    const int a = find(g.a.cell), b = find(g.b.cell);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::map<int, std::vector<int>> by_root;
  for (int c = 0; c < n; ++c) by_root[find(c)].push_back(c);
  std::vector<std::vector<int>> out;
  for (auto& [r, cs] : by_root) out.push_back(std::move(cs));
  return out;
}

std::vector<std::int64_t> component_code(const PatternedManifold& p, const std::vector<int>& cells) {
  // Only cells with the least (tag, face count) can start a minimal code.
  std::pair<int, std::size_t> key{INT32_MAX, 0};
  for (int c : cells)
    key = std::min(key, {p.cell_tag[static_cast<std::size_t>(c)], p.complex.cell(c).faces.size()});
  Encoder enc(p, cells);
  std::vector<std::int64_t> best, cur;
  for (int c : cells) {
    if (std::pair<int, std::size_t>{p.cell_tag[static_cast<std::size_t>(c)], p.complex.cell(c).faces.size()} != key)
      continue;
    const auto& faces = p.complex.cell(c).faces;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      for (int s = 0; s < static_cast<int>(faces[static_cast<std::size_t>(f)].verts.size()); ++s)
        for (int dir : {1, -1})
          if (enc.encode(c, {f, s, dir}, best, cur) && (best.empty() || cur < best)) best = cur;
  }
  return best;
}

}  // namespace

std::string signature(const PatternedManifold& p) {
  std::vector<std::string> parts;
  for (const auto& comp : components(p)) {
    std::string s;
    for (std::int64_t x : component_code(p, comp)) {
      if (!s.empty()) s += '.';
      s += std::to_string(x);
    }
    parts.push_back(std::move(s));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = p.sv_capped ? "gs1:c:" : "gs1:o:";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "|" : "") + parts[i];
  return out;
}

std::string signature_digest(const std::string& sig) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : sig) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gutscat
