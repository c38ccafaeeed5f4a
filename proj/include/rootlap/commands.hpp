#pragma once

// Command implementations behind the `rootlap` tool. Each command reads its
// inputs, runs the library and writes files into the output directory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rootlap/datasets.hpp"
#include "rootlap/embedding.hpp"
#include "rootlap/errors.hpp"
#include "rootlap/graph.hpp"
#include "rootlap/gsp.hpp"
#include "rootlap/io.hpp"
#include "rootlap/render.hpp"
#include "rootlap/spectral.hpp"

namespace rootlap::commands {

using Json = nlohmann::ordered_json;

struct EpsilonRule {
  double epsilon;
};
struct KnnRule {
  Index neighbors;
};
/// t > 0, or unset to use the median squared edge length.
struct HeatRule {
  std::optional<double> t;
};
struct TrivialRule {};

using GraphRule = std::variant<std::monostate, EpsilonRule, KnnRule>;
using WeightRule = std::variant<std::monostate, HeatRule, TrivialRule>;

/// Where a graph comes from: a point cloud plus construction rules, or an
/// edge list with explicit weights.
struct GraphSource {
  std::string points_path;
  std::string edges_path;
  Index vertices = 0;
  bool header = false;
  GraphRule graph_rule;
  WeightRule weight_rule;
  unsigned threads = 1;
};

struct RunConfig {
  GraphSource source;
  EmbeddingMode mode = EmbeddingMode::standard;
  Index dim = 2;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

inline void config_error(const std::string& message) { throw Error(ErrorKind::config, message); }

inline void validate(const GraphSource& src) {
  const bool points = !src.points_path.empty();
  const bool edges = !src.edges_path.empty();
  if (points == edges) config_error("give exactly one of --input (point cloud) or --edges (edge list)");
  if (points) {
    if (std::holds_alternative<std::monostate>(src.graph_rule))
      config_error("point-cloud input needs one graph rule: --epsilon or --knn");
    if (std::holds_alternative<std::monostate>(src.weight_rule))
      config_error("point-cloud input needs one weight rule: --heat-t or --trivial");
  } else {
    if (!std::holds_alternative<std::monostate>(src.graph_rule))
      config_error("--epsilon/--knn apply to point-cloud input only");
    if (std::holds_alternative<HeatRule>(src.weight_rule))
      config_error("--heat-t needs point coordinates; edge lists carry their own weights");
  }
}

inline void validate(const RunConfig& cfg) {
  validate(cfg.source);
  if (cfg.dim < 1) config_error("--dim must be at least 1");
}

/// Graph plus a description of how it was built, for the JSON reports.
struct LoadedGraph {
  WeightedGraph graph;
  Json description;
};

inline LoadedGraph load_graph(const GraphSource& src) {
  validate(src);
  Json desc;
  if (!src.edges_path.empty()) {
    auto in = io::open_input(src.edges_path);
    WeightedGraph g = io::load_edge_list(in, src.vertices);
    desc["source"] = "edges";
    if (std::holds_alternative<TrivialRule>(src.weight_rule)) {
      Eigen::MatrixXd w = (g.weights().array() > 0.0).cast<double>().matrix();
      g = WeightedGraph::from_weights(std::move(w));
      desc["weights"] = "trivial";
    } else {
      desc["weights"] = "given";
    }
    return {std::move(g), std::move(desc)};
  }

  auto in = io::open_input(src.points_path);
  const PointCloud pc = io::load_point_cloud(in, src.header);
  desc["source"] = "points";
  Adjacency adj(pc.size());
  if (const auto* eps = std::get_if<EpsilonRule>(&src.graph_rule)) {
    adj = build_epsilon_graph(pc, eps->epsilon, {}, src.threads);
    desc["graph"] = "epsilon";
    desc["epsilon"] = eps->epsilon;
  } else {
    const auto& knn = std::get<KnnRule>(src.graph_rule);
    adj = build_knn_graph(pc, knn.neighbors, src.threads);
    desc["graph"] = "knn";
    desc["knn"] = knn.neighbors;
  }
  if (const auto* heat = std::get_if<HeatRule>(&src.weight_rule)) {
    const double t = heat->t.value_or(median_sq_edge_length(adj, pc));
    desc["weights"] = "heat";
    desc["t"] = t;
    return {apply_heat_kernel_weights(adj, pc, t), std::move(desc)};
  }
  desc["weights"] = "trivial";
  return {apply_trivial_weights(adj), std::move(desc)};
}

inline Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const EnergyReport& e) {
  Json j;
  j["dirichlet"] = e.dirichlet;
  j["root_dirichlet"] = e.root_dirichlet;
  j["trace_form"] = e.trace_form;
  j["per_column"] = to_json(e.per_column);
  return j;
}

inline Json to_json(const ConstraintReport& c) {
  Json j;
  j["max_scaling_violation"] = c.max_scaling_violation;
  j["max_translation_violation"] = c.max_translation_violation;
  j["passed"] = c.passed;
  return j;
}

/// Flat object with the four distortion fields in fixed order.
inline Json to_json(const QualityReport& q) {
  Json j;
  j["spectral_distortion"] = q.spectral_distortion;
  j["vertex_frequency_distortion"] = q.vertex_frequency_distortion;
  j["energy_distortion"] = q.energy_distortion;
  j["variance_distortion"] = q.variance_distortion;
  return j;
}

inline Json error_json(std::string_view kind, std::string_view message) {
  Json j;
  j["kind"] = kind;
  j["message"] = message;
  return j;
}

/// Exit status for a failure of the given kind: 2 for IO/config, 1 otherwise.
constexpr int exit_code(ErrorKind kind) noexcept {
  return kind == ErrorKind::io || kind == ErrorKind::config ? 2 : 1;
}

inline Json embedding_sidecar(const Embedding& emb, const EnergyReport& energy, const ConstraintReport& constraints) {
  Json j;
  j["mode"] = mode_name(emb.mode);
  j["vertices"] = emb.coords.rows();
  j["dim"] = emb.coords.cols();
  j["components"] = emb.partition.count;
  Json spectra = Json::array();
  for (const auto& s : emb.component_spectra) spectra.push_back(to_json(s));
  j["spectrum_used"] = std::move(spectra);
  j["energy"] = to_json(energy);
  j["constraints"] = to_json(constraints);
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = io::open_output(path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
}

inline std::filesystem::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir + "': " + ec.message());
  return std::filesystem::path(dir);
}

struct EmbedOutputs {
  std::filesystem::path coords;
  std::filesystem::path sidecar;
  std::optional<std::filesystem::path> scatter;
};

/// Writes embedding_<mode>.csv and .json, plus .svg when dim == 2.
inline EmbedOutputs cmd_embed(const RunConfig& cfg) {
  validate(cfg);
  const LoadedGraph loaded = load_graph(cfg.source);
  const WeightedGraph& g = loaded.graph;
  const Embedding emb = eigenmaps(g, cfg.dim, cfg.mode);
  const EnergyReport energy = dirichlet_energy(g, emb.coords);
  const ConstraintReport constraints = verify_embedding_constraints(emb, g);

  const auto dir = ensure_dir(cfg.out_dir);
  const std::string stem = std::string("embedding_") + mode_name(cfg.mode);
  EmbedOutputs out{dir / (stem + ".csv"), dir / (stem + ".json"), std::nullopt};

  std::ostringstream csv;
  io::write_matrix_csv(csv, emb.coords);
  write_text(out.coords, csv.str());

  Json sidecar = embedding_sidecar(emb, energy, constraints);
  sidecar["graph"] = loaded.description;
  write_text(out.sidecar, sidecar.dump(2) + "\n");

  if (cfg.dim == 2) {
    render::ScatterSpec spec;
    spec.title = std::string("eigenmaps (") + mode_name(cfg.mode) + ")";
    std::ostringstream svg;
    render::write_scatter_svg(svg, emb.coords, spec);
    out.scatter = dir / (stem + ".svg");
    write_text(*out.scatter, svg.str());
  }
  return out;
}

enum class HeatmapWhich { laplacian, root, both };

inline HeatmapWhich parse_heatmap_which(std::string_view s) {
  if (s == "laplacian") return HeatmapWhich::laplacian;
  if (s == "root") return HeatmapWhich::root;
  if (s == "both") return HeatmapWhich::both;
  config_error("--which must be laplacian, root or both");
  return HeatmapWhich::both;
}

struct HeatmapConfig {
  GraphSource source;
  HeatmapWhich which = HeatmapWhich::both;
  render::HeatmapSpec spec;
  std::string out_dir = ".";
};

/// Renders L and/or sqrt(L) to laplacian.<ext> and root_laplacian.<ext>.
inline std::vector<std::filesystem::path> cmd_heatmap(const HeatmapConfig& cfg) {
  const LoadedGraph loaded = load_graph(cfg.source);
  const Eigen::MatrixXd& l = loaded.graph.laplacian();
  const auto dir = ensure_dir(cfg.out_dir);
  const std::string ext = cfg.spec.format == render::ImageFormat::pgm ? ".pgm" : ".svg";
  std::vector<std::filesystem::path> written;

  auto emit = [&](const Eigen::MatrixXd& m, const std::string& name, const std::string& title) {
    render::HeatmapSpec spec = cfg.spec;
    if (spec.title.empty()) spec.title = title;
    std::ostringstream img;
    render::write_heatmap(img, m, spec);
    written.push_back(dir / (name + ext));
    write_text(written.back(), img.str());
  };
  if (cfg.which != HeatmapWhich::root) emit(l, "laplacian", "Laplacian");
  if (cfg.which != HeatmapWhich::laplacian) emit(matrix_sqrt_psd(l), "root_laplacian", "root Laplacian");
  return written;
}

struct FilterSpec {
  enum class Kind { identity, low_pass, heat } kind = Kind::identity;
  double parameter = 0.0;
};

/// "identity", "lowpass:<cutoff>" or "heat:<tau>".
inline FilterSpec parse_filter(std::string_view text) {
  FilterSpec f;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  if (name == "identity" && colon == std::string_view::npos) return f;
  if (colon == std::string_view::npos) config_error("filter '" + std::string(text) + "' needs a parameter");
  double value = 0.0;
  try {
    value = io::detail::parse_real(text.substr(colon + 1), 0);
  } catch (const Error&) {
    config_error("bad filter parameter in '" + std::string(text) + "'");
  }
  if (name == "lowpass") {
    f.kind = FilterSpec::Kind::low_pass;
  } else if (name == "heat") {
    if (value < 0.0) config_error("heat filter tau must be nonnegative");
    f.kind = FilterSpec::Kind::heat;
  } else {
    config_error("unknown filter '" + std::string(name) + "'");
  }
  f.parameter = value;
  return f;
}

inline GraphSignal apply_filter(const SpectralDecomposition& dec, const GraphSignal& x, const FilterSpec& f) {
  switch (f.kind) {
    case FilterSpec::Kind::low_pass: return apply_spectral_filter(dec, x, IdealLowPass{f.parameter});
    case FilterSpec::Kind::heat: return apply_spectral_filter(dec, x, HeatFilter{f.parameter});
    case FilterSpec::Kind::identity: break;
  }
  return apply_spectral_filter(dec, x, IdentityFilter{});
}

struct GspConfig {
  GraphSource source;
  std::string signal_path;
  FilterSpec filter;
  /// Evaluate filter gains on the root spectrum sqrt(lambda) and report the
  /// spectral distortion of S = sqrt(L) against L.
  bool root = false;
  std::string out_dir = ".";
};

struct GspResult {
  GraphSignal filtered;
  QualityReport quality;
};

/// Filters a vertex signal; writes filtered.csv and quality.json.
inline GspResult cmd_gsp(const GspConfig& cfg) {
  const LoadedGraph loaded = load_graph(cfg.source);
  if (cfg.signal_path.empty()) config_error("gsp needs --signal");
  auto in = io::open_input(cfg.signal_path);
  const GraphSignal x = io::load_signal(in);
  const Eigen::MatrixXd& l = loaded.graph.laplacian();
  if (x.size() != l.rows())
    throw Error(ErrorKind::dimension_mismatch, "signal has " + std::to_string(x.size()) + " values, graph has " +
                                                   std::to_string(l.rows()) + " vertices");

  const SpectralDecomposition dec = symmetric_eigendecomposition(l);
  const SpectralDecomposition basis = cfg.root ? root_decomposition(dec) : dec;
  GraphSignal y = apply_filter(basis, x, cfg.filter);

  // The filter leaves the graph untouched, so the after-operator is L itself
  // unless the root operator was requested.
  const Eigen::MatrixXd after = cfg.root ? root_gft_operator(l) : l;
  const QualityReport q = quality_report(l, after, dec, x, y);

  const auto dir = ensure_dir(cfg.out_dir);
  std::ostringstream csv;
  io::write_signal_csv(csv, y);
  write_text(dir / "filtered.csv", csv.str());
  write_text(dir / "quality.json", to_json(q).dump(2) + "\n");
  return {std::move(y), q};
}

struct GenConfig {
  datasets::DatasetKind kind = datasets::DatasetKind::swiss_roll;
  Index n = 500;
  std::uint64_t seed = 0;
  double noise = 0.0;
  datasets::RandomGraphOptions graph;
  std::string out_dir = ".";
};

/// Writes points.csv (swiss roll also gets surface.csv) or graph.txt.
inline std::filesystem::path cmd_gen(const GenConfig& cfg) {
  const auto dir = ensure_dir(cfg.out_dir);
  std::ostringstream out;
  using datasets::DatasetKind;
  switch (cfg.kind) {
    case DatasetKind::random_graph: {
      io::write_edge_list(out, datasets::random_graph(cfg.n, cfg.seed, cfg.graph));
      write_text(dir / "graph.txt", out.str());
      return dir / "graph.txt";
    }
    case DatasetKind::swiss_roll: {
      const auto roll = datasets::swiss_roll(cfg.n, cfg.seed, cfg.noise);
      io::write_matrix_csv(out, roll.points.points());
      std::ostringstream surface;
      io::write_matrix_csv(surface, roll.surface);
      write_text(dir / "surface.csv", surface.str());
      break;
    }
    case DatasetKind::s_curve: io::write_matrix_csv(out, datasets::s_curve(cfg.n, cfg.seed, cfg.noise).points()); break;
    case DatasetKind::circle: io::write_matrix_csv(out, datasets::circle(cfg.n, cfg.seed, cfg.noise).points()); break;
  }
  write_text(dir / "points.csv", out.str());
  return dir / "points.csv";
}

}  // namespace rootlap::commands
