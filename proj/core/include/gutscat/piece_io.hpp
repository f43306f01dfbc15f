#pragma once

#include <string>
#include <vector>

#include "gutscat/gi_decomposition.hpp"

namespace gutscat {

/// Text form of patterned pieces, one block per piece:
///
///   pieces N
///   piece KIND capped 0|1 annuli K cells C gluings G patterns P
///   cell VERTEX_COUNT FACE_COUNT TAG
///   face CLASS n v_1 ... v_n          (FACE_COUNT lines per cell)
///   glue CELL FACE CELL FACE KIND map_1 ... map_n
///   pattern CELL FACE LABEL
///
/// Source cell numbers are not kept. '#' starts a comment.
std::string write_pieces(const std::vector<PatternedManifold>& pieces);
std::vector<PatternedManifold> parse_pieces(const std::string& text);
std::vector<PatternedManifold> load_pieces(const std::string& path);

}  // namespace gutscat
