#include "gutscat/piece_io.hpp"

#include <fstream>
#include <sstream>

#include "gutscat/error.hpp"

namespace gutscat {

namespace {

template <class E, std::size_t N>
E parse_enum(const std::string& token, const E (&values)[N], const char* what) {
  for (E v : values)
    if (token == to_string(v)) return v;
  throw DomainError(std::string("unknown ") + what + " '" + token + "'");
}

constexpr NodeKind kNodeKinds[] = {NodeKind::Guts, NodeKind::IBundle, NodeKind::PseudoGuts, NodeKind::PseudoIBundle};
constexpr FaceClass kFaceClasses[] = {FaceClass::DiscS,    FaceClass::DiscSv,       FaceClass::Hexagonal,
                                      FaceClass::QuadFace, FaceClass::VerticalQuad, FaceClass::Horizontal};
constexpr GlueKind kGlueKinds[] = {GlueKind::Hexagonal, GlueKind::QuadQuad, GlueKind::Vertical,
                                   GlueKind::Frontier,  GlueKind::Attach,   GlueKind::Fold};

// Non-comment lines as token streams, with line numbers for messages.
class Lines {
 public:
  explicit Lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines_.emplace_back(no, line);
    }
  }

  std::istringstream next(const char* keyword) {
    if (at_ >= lines_.size()) throw DomainError(std::string("piece file ends before '") + keyword + "'");
    const auto& [no, line] = lines_[at_++];
    no_ = no;
    std::istringstream in(line);
    std::string head;
    in >> head;
    if (head != keyword) fail(std::string("expected '") + keyword + "', got '" + head + "'");
    return in;
  }

  bool done() const { return at_ >= lines_.size(); }
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("piece file line " + std::to_string(no_) + ": " + why);
  }

 private:
  std::vector<std::pair<int, std::string>> lines_;
  std::size_t at_ = 0;
  int no_ = 0;
};

template <class T>
T read(std::istringstream& in, Lines& lines) {
  T x{};
  if (!(in >> x)) lines.fail("missing or malformed field");
  return x;
}

// Reads "name value" pairs in order.
int field(std::istringstream& in, Lines& lines, const char* name) {
  if (read<std::string>(in, lines) != name) lines.fail(std::string("expected field '") + name + "'");
  return read<int>(in, lines);
}

}  // namespace

std::string write_pieces(const std::vector<PatternedManifold>& pieces) {
  std::ostringstream out;
  out << "pieces " << pieces.size() << "\n";
  for (const auto& p : pieces) {
    const auto& cells = p.complex.cells();
    out << "piece " << to_string(p.kind) << " capped " << (p.sv_capped ? 1 : 0) << " annuli " << p.annulus_count
        << " cells " << cells.size() << " gluings " << p.complex.gluings().size() << " patterns " << p.pattern.size()
        << "\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << "cell " << cells[c].vertex_count << " " << cells[c].faces.size() << " " << p.cell_tag[c] << "\n";
      for (const auto& f : cells[c].faces) {
        out << "face " << to_string(f.cls) << " " << f.verts.size();
        for (int v : f.verts) out << " " << v;
        out << "\n";
      }
    }
    for (const auto& g : p.complex.gluings()) {
      out << "glue " << g.a.cell << " " << g.a.face << " " << g.b.cell << " " << g.b.face << " " << to_string(g.kind);
      for (int m : g.map) out << " " << m;
      out << "\n";
    }
    for (const auto& [f, label] : p.pattern) out << "pattern " << f.cell << " " << f.face << " " << label << "\n";
  }
  return out.str();
}

std::vector<PatternedManifold> parse_pieces(const std::string& text) {
  Lines lines(text);
  auto head = lines.next("pieces");
  const int n = read<int>(head, lines);
  if (n < 0) lines.fail("negative piece count");
  std::vector<PatternedManifold> out;
  for (int i = 0; i < n; ++i) {
    auto in = lines.next("piece");
    PatternedManifold p;
    p.kind = parse_enum(read<std::string>(in, lines), kNodeKinds, "node kind");
    p.sv_capped = field(in, lines, "capped") != 0;
    p.annulus_count = field(in, lines, "annuli");
    const int ncell = field(in, lines, "cells");
    const int nglue = field(in, lines, "gluings");
    const int npat = field(in, lines, "patterns");
    if (ncell < 0 || nglue < 0 || npat < 0 || p.annulus_count < 0) lines.fail("negative count");
    for (int c = 0; c < ncell; ++c) {
      auto cl = lines.next("cell");
      PolyCell cell;
      cell.vertex_count = read<int>(cl, lines);
      const int nf = read<int>(cl, lines);
      p.cell_tag.push_back(read<int>(cl, lines));
      for (int f = 0; f < nf; ++f) {
        auto fl = lines.next("face");
        PolyFace face;
        face.cls = parse_enum(read<std::string>(fl, lines), kFaceClasses, "face class");
        const int nv = read<int>(fl, lines);
        for (int k = 0; k < nv; ++k) {
          const int v = read<int>(fl, lines);
          if (v < 0 || v >= cell.vertex_count) lines.fail("face vertex out of range");
          face.verts.push_back(v);
        }
        cell.faces.push_back(std::move(face));
      }
      p.complex.add_cell(std::move(cell));
    }
    const auto check_face = [&](FaceRef f) {
      if (f.cell < 0 || f.cell >= ncell || f.face < 0 ||
          f.face >= static_cast<int>(p.complex.cell(f.cell).faces.size()))
        lines.fail("face reference out of range");
    };
    for (int g = 0; g < nglue; ++g) {
      auto gl = lines.next("glue");
      PolyGluing glue;
      glue.a = {read<int>(gl, lines), read<int>(gl, lines)};
      glue.b = {read<int>(gl, lines), read<int>(gl, lines)};
      glue.kind = parse_enum(read<std::string>(gl, lines), kGlueKinds, "gluing kind");
      check_face(glue.a);
      check_face(glue.b);
      const auto size = p.complex.cell(glue.a.cell).faces[static_cast<std::size_t>(glue.a.face)].verts.size();
      for (std::size_t k = 0; k < size; ++k) glue.map.push_back(read<int>(gl, lines));
      for (int m : glue.map)
        if (m < 0 || m >= static_cast<int>(size)) lines.fail("gluing map entry out of range");
      try {
        p.complex.add_gluing(std::move(glue));
      } catch (const InternalError& e) {
        lines.fail(e.what());
      }
    }
    for (int k = 0; k < npat; ++k) {
      auto pl = lines.next("pattern");
      const FaceRef f{read<int>(pl, lines), read<int>(pl, lines)};
      check_face(f);
      const int label = read<int>(pl, lines);
      if (label < 0 || label >= p.annulus_count) lines.fail("pattern label out of range");
      if (!p.pattern.emplace(f, label).second) lines.fail("face marked twice");
    }
    out.push_back(std::move(p));
  }
  if (!lines.done()) lines.fail("trailing content after the last piece");
  return out;
}

std::vector<PatternedManifold> load_pieces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open piece file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pieces(ss.str());
}

}  // namespace gutscat
