// rootlap: spectral embeddings, root-Laplacian heatmaps and graph filtering
// from the command line.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rootlap/commands.hpp"

namespace {

using namespace rootlap;
using namespace rootlap::commands;

struct GraphFlags {
  std::string input;
  std::string edges;
  long long vertices = 0;
  bool header = false;
  std::optional<double> epsilon;
  std::optional<long long> knn;
  std::optional<std::string> heat_t;
  bool trivial = false;
  unsigned threads = 1;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& f) {
  cmd->add_option("--input", f.input, "point cloud CSV, one point per row");
  cmd->add_option("--edges", f.edges, "edge list with lines 'i j w'");
  cmd->add_option("--vertices", f.vertices, "vertex count for edge lists (default: inferred)");
  cmd->add_flag("--header", f.header, "skip the first CSV row");
  cmd->add_option("--epsilon", f.epsilon, "join points with squared distance < epsilon");
  cmd->add_option("--knn", f.knn, "join mutual-or-one-sided k nearest neighbours");
  cmd->add_option("--heat-t", f.heat_t, "heat kernel scale t, or 'median' for the median squared edge length");
  cmd->add_flag("--trivial", f.trivial, "unit weights on every edge");
  cmd->add_option("--threads", f.threads, "threads for distance computation (results do not change)");
}

GraphSource to_source(const GraphFlags& f) {
  GraphSource src;
  src.points_path = f.input;
  src.edges_path = f.edges;
  src.vertices = static_cast<Index>(f.vertices);
  src.header = f.header;
  src.threads = std::max(1u, f.threads);
  if (f.epsilon && f.knn) config_error("--epsilon and --knn are mutually exclusive");
  if (f.epsilon) src.graph_rule = EpsilonRule{*f.epsilon};
  if (f.knn) src.graph_rule = KnnRule{static_cast<Index>(*f.knn)};
  if (f.heat_t && f.trivial) config_error("--heat-t and --trivial are mutually exclusive");
  if (f.trivial) src.weight_rule = TrivialRule{};
  if (f.heat_t) {
    if (*f.heat_t == "median") {
      src.weight_rule = HeatRule{};
    } else {
      try {
        src.weight_rule = HeatRule{io::detail::parse_real(*f.heat_t, 0)};
      } catch (const Error&) {
        config_error("--heat-t expects a positive number or 'median'");
      }
    }
  }
  return src;
}

int fail(std::string_view kind, std::string_view message, int code) {
  std::cerr << error_json(kind, message).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rootlap: Laplacian and root-Laplacian eigenmaps, root graph Fourier transform"};
  app.require_subcommand(1);

  GraphFlags embed_flags;
  std::string mode = "standard";
  long long dim = 2;
  std::string embed_out = ".";
  std::uint64_t embed_seed = 0;
  auto* embed = app.add_subcommand("embed", "spectral embedding of a graph");
  add_graph_flags(embed, embed_flags);
  embed->add_option("--mode", mode, "standard or root")->check(CLI::IsMember({"standard", "root"}));
  embed->add_option("--dim", dim, "target dimension m");
  embed->add_option("--out", embed_out, "output directory");
  embed->add_option("--seed", embed_seed, "recorded for reproducibility");

  GraphFlags heat_flags;
  std::string which = "both", format = "svg", scale = "diverging", heat_out = ".";
  int cell = 8;
  auto* heatmap = app.add_subcommand("heatmap", "render L and/or sqrt(L) as a matrix heatmap");
  add_graph_flags(heatmap, heat_flags);
  heatmap->add_option("--which", which, "laplacian, root or both")->check(CLI::IsMember({"laplacian", "root", "both"}));
  heatmap->add_option("--format", format, "svg or pgm")->check(CLI::IsMember({"svg", "pgm"}));
  heatmap->add_option("--scale", scale, "diverging (centred on 0) or linear")
      ->check(CLI::IsMember({"diverging", "linear"}));
  heatmap->add_option("--cell", cell, "pixels per matrix entry");
  heatmap->add_option("--out", heat_out, "output directory");

  GraphFlags gsp_flags;
  std::string signal, filter = "identity", gsp_out = ".";
  bool root = false;
  auto* gsp = app.add_subcommand("gsp", "filter a vertex signal and report distortion metrics");
  add_graph_flags(gsp, gsp_flags);
  gsp->add_option("--signal", signal, "single-column CSV, one value per vertex");
  gsp->add_option("--filter", filter, "identity, lowpass:<cutoff> or heat:<tau>");
  gsp->add_flag("--root", root, "filter on the root spectrum and compare S = sqrt(L) with L");
  gsp->add_option("--out", gsp_out, "output directory");

  std::string kind = "swiss_roll", gen_out = ".";
  long long n = 500;
  std::uint64_t gen_seed = 0;
  double noise = 0.0;
  datasets::RandomGraphOptions graph_opt;
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--kind", kind, "swiss_roll, s_curve, circle or random_graph")
      ->check(CLI::IsMember({"swiss_roll", "s_curve", "circle", "random_graph"}));
  gen->add_option("--n", n, "number of points or vertices");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--noise", noise, "Gaussian noise standard deviation");
  gen->add_option("--edge-prob", graph_opt.edge_probability, "random_graph edge probability");
  gen->add_flag("--connected", graph_opt.connected, "random_graph: add a random spanning tree");
  gen->add_option("--out", gen_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  try {
    if (*embed) {
      RunConfig cfg;
      cfg.source = to_source(embed_flags);
      cfg.mode = mode == "root" ? EmbeddingMode::root : EmbeddingMode::standard;
      cfg.dim = static_cast<Index>(dim);
      cfg.out_dir = embed_out;
      cfg.seed = embed_seed;
      const auto out = cmd_embed(cfg);
      std::cout << out.coords.string() << '\n' << out.sidecar.string() << '\n';
      if (out.scatter) std::cout << out.scatter->string() << '\n';
    } else if (*heatmap) {
      HeatmapConfig cfg;
      cfg.source = to_source(heat_flags);
      cfg.which = parse_heatmap_which(which);
      cfg.spec.format = render::parse_image_format(format);
      cfg.spec.scale = render::parse_color_scale(scale);
      cfg.spec.cell_size = cell;
      cfg.out_dir = heat_out;
      for (const auto& p : cmd_heatmap(cfg)) std::cout << p.string() << '\n';
    } else if (*gsp) {
      GspConfig cfg;
      cfg.source = to_source(gsp_flags);
      cfg.signal_path = signal;
      cfg.filter = parse_filter(filter);
      cfg.root = root;
      cfg.out_dir = gsp_out;
      const auto result = cmd_gsp(cfg);
      std::cout << to_json(result.quality).dump() << '\n';
    } else if (*gen) {
      GenConfig cfg;
      cfg.kind = datasets::parse_dataset_kind(kind);
      cfg.n = static_cast<Index>(n);
      cfg.seed = gen_seed;
      cfg.noise = noise;
      cfg.graph = graph_opt;
      cfg.out_dir = gen_out;
      std::cout << cmd_gen(cfg).string() << '\n';
    }
  } catch (const Error& e) {
    return fail(kind_name(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
