#pragma once

#include <string>
#include <vector>

#include "report.hpp"

namespace gutscat::cli {

/// Shared state of one run: the thread budget and the files read.
struct Context {
  int threads = 1;
  std::vector<InputFile> inputs;

  /// Reads a file and records its digest in the manifest.
  std::string load(const std::string& path);
};

/// A finished report and the exit status it implies (0 or 1).
struct Outcome {
  Report report;
  int status = 0;
};

Outcome run_validate(Context& ctx, const std::string& tri);
Outcome run_surfaces(Context& ctx, const std::string& tri, int max_coord);
Outcome run_cut(Context& ctx, const std::string& tri, const std::string& surface);
Outcome run_guts(Context& ctx, const std::string& tri, const std::string& surface, const std::string& pieces_out,
                 bool refined);
Outcome run_catalog(Context& ctx, const std::string& tri, int max_coord);
Outcome run_norm(Context& ctx, const std::string& pieces, const std::string& rel, int index);
Outcome run_census(Context& ctx, const std::string& sv_bound, const std::string& emit);
Outcome run_glue(Context& ctx, long long p, long long q, int eps);
Outcome run_tree(Context& ctx, const std::string& file, int h);

}  // namespace gutscat::cli
