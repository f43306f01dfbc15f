#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gutscat/error.hpp"

#ifndef GUTSCAT_VERSION
#define GUTSCAT_VERSION "0.0.0"
#endif

using namespace gutscat;
using namespace gutscat::cli;

int main(int argc, char** argv) {
  CLI::App app{"gutscat: guts, norms and gluings of closed 3-manifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", GUTSCAT_VERSION);

  int threads = 1;
  std::string manifest_path, out_path;
  app.add_option("--threads", threads, "worker threads for enumeration, catalog and census")->check(CLI::Range(1, 256));
  app.add_option("--manifest", manifest_path, "write the run manifest here instead of stderr");
  app.add_option("--out", out_path, "write the report here instead of stdout");

  std::string tri, surface, pieces, pieces_out, rel = "complement", sv_bound, emit = "table", tree_file;
  int max_coord = 2, index = -1, h = -1, eps = 1;
  long long p = 0, q = 0;
  bool refined = false;

  auto* validate = app.add_subcommand("validate", "check a gluing table");
  validate->add_option("--tri", tri)->required();
  auto* surfaces = app.add_subcommand("surfaces", "enumerate admissible normal surfaces");
  surfaces->add_option("--tri", tri)->required();
  surfaces->add_option("--max-coord", max_coord)->check(CLI::NonNegativeNumber);
  auto* cut = app.add_subcommand("cut", "cut along a normal surface and the vertex link");
  cut->add_option("--tri", tri)->required();
  cut->add_option("--surface", surface)->required();
  auto* guts = app.add_subcommand("guts", "guts and I-bundle decomposition of one surface");
  guts->add_option("--tri", tri)->required();
  guts->add_option("--surface", surface)->required();
  guts->add_option("--pieces-out", pieces_out, "write the guts pieces for `norm --piece`");
  guts->add_flag("--refined", refined, "write the pieces after the separating refinement");
  auto* catalog = app.add_subcommand("catalog", "guts signatures over all bounded surfaces");
  catalog->add_option("--tri", tri)->required();
  catalog->add_option("--max-coord", max_coord)->check(CLI::NonNegativeNumber);
  auto* norm = app.add_subcommand("norm", "relative homology and norm bounds of guts pieces");
  norm->add_option("--piece", pieces)->required();
  norm->add_option("--rel", rel, "none|boundary|pattern|complement|component:i");
  norm->add_option("--index", index, "only this piece of the file");
  auto* cen = app.add_subcommand("census", "Seifert homology spheres under a Seifert-volume bound");
  cen->add_option("--sv-bound", sv_bound)->required();
  cen->add_option("--emit", emit)->check(CLI::IsMember({"table", "lines"}));
  auto* glue = app.add_subcommand("glue", "gluing matrix and filled homology for (p, q, eps)");
  glue->add_option("--p", p)->required();
  glue->add_option("--q", q)->required();
  glue->add_option("--eps", eps)->check(CLI::IsMember({-1, 1}));
  auto* tree = app.add_subcommand("tree", "first homology of a glued JSJ tree");
  tree->add_option("--file", tree_file)->required();
  tree->add_option("--hm", h, "also check the graph against this h(M)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  ctx.threads = threads;
  try {
    Outcome out = [&]() -> Outcome {
      if (*validate) return run_validate(ctx, tri);
      if (*surfaces) return run_surfaces(ctx, tri, max_coord);
      if (*cut) return run_cut(ctx, tri, surface);
      if (*guts) return run_guts(ctx, tri, surface, pieces_out, refined);
      if (*catalog) return run_catalog(ctx, tri, max_coord);
      if (*norm) return run_norm(ctx, pieces, rel, index);
      if (*cen) return run_census(ctx, sv_bound, emit);
      if (*glue) return run_glue(ctx, p, q, eps);
      return run_tree(ctx, tree_file, h);
    }();
    const std::string body = out.report.body();
    RunManifest m;
    m.command_line.assign(argv, argv + argc);
    m.inputs = ctx.inputs;
    m.version = GUTSCAT_VERSION;
    m.result_digest = digest_bytes(body);
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = body + "manifest-digest: " + m.digest(out.report.command()) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw DomainError("cannot write " + out_path);
      f << text;
    }
    if (manifest_path.empty()) {
      std::cerr << m.json(out.report.command());
    } else {
      std::ofstream f(manifest_path, std::ios::binary);
      if (!f) throw DomainError("cannot write " + manifest_path);
      f << m.json(out.report.command());
    }
    return out.status;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
