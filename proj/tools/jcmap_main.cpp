// jcmap: journal citation network classification and mapping.
// Pipeline: clean -> largest component -> seeded clustering -> recursive
// decomposition -> partition comparison -> map export. Every run is fully
// determined by its declared seeds and records a manifest for replay.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jcmap/clustering.hpp"
#include "jcmap/digest.hpp"
#include "jcmap/graph.hpp"
#include "jcmap/hierarchy.hpp"
#include "jcmap/io.hpp"
#include "jcmap/layout.hpp"
#include "jcmap/netstats.hpp"
#include "jcmap/partition_stats.hpp"
#include "jcmap/synth.hpp"
#include "jcmap/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Accumulates everything a manifest needs while a command runs.
struct RunRecorder {
  std::string command;
  std::vector<std::string> replay;  // full argv able to reproduce the run
  ordered_json parameters = ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string manifest_path;  // empty: derive from the first output

  void write() const {
    std::string path = manifest_path;
    if (path.empty()) {
      if (outputs.empty()) return;  // report-only command without --manifest
      path = outputs.front() + ".manifest.json";
    }
    ordered_json j;
    j["tool"] = "jcmap";
    j["version"] = jcmap::kVersion;
    j["command"] = command;
    j["replay"] = replay;
    j["parameters"] = parameters;
    auto digest_list = [](const std::vector<std::string>& paths) {
      ordered_json arr = ordered_json::array();
      for (const auto& p : paths)
        arr.push_back({{"path", p}, {"sha256", jcmap::sha256_hex(read_file(p))}});
      return arr;
    };
    j["inputs"] = digest_list(inputs);
    j["outputs"] = digest_list(outputs);
    j["timestamp"] = iso8601_now();
    write_file(path, j.dump(2) + "\n");
  }
};

jcmap::CitationGraph load_net(const std::string& path) {
  try {
    return jcmap::parse_net(read_file(path));
  } catch (const jcmap::ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

jcmap::Partition load_clu(const std::string& path, std::optional<jcmap::NodeId> expected_n = {}) {
  try {
    return jcmap::parse_clu(read_file(path), expected_n);
  } catch (const jcmap::ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

// Loop removal shared by every subcommand that symmetrizes; the count goes to
// the log and the manifest.
jcmap::CitationGraph drop_loops_logged(const jcmap::CitationGraph& g, RunRecorder& rec) {
  auto [clean, removed] = remove_loops(g);
  if (removed > 0) std::cerr << "note: removed " << removed << " loops\n";
  rec.parameters["loops_removed"] = removed;
  return std::move(clean);
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<jcmap::NodeId> parse_id_spec(const std::string& spec,
                                         const jcmap::CitationGraph& g) {
  std::vector<jcmap::NodeId> ids;
  if (spec.rfind("clu:", 0) == 0) {
    // clu:<file>:<cluster>[,<cluster>...] selects the union of those clusters
    const auto rest = spec.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw DataError("expected clu:<file>:<cluster list>, got '" + spec + "'");
    const auto file = rest.substr(0, colon);
    const auto p = load_clu(file, g.node_count());
    std::istringstream list(rest.substr(colon + 1));
    std::string token;
    std::vector<char> chosen(static_cast<std::size_t>(g.node_count()) + 1, 0);
    while (std::getline(list, token, ',')) {
      int cluster = 0;
      try {
        cluster = std::stoi(token);
      } catch (...) {
        throw DataError("invalid cluster id '" + token + "'");
      }
      if (!p.has_cluster(cluster)) throw DataError("unknown cluster id " + token);
      for (jcmap::NodeId m : p.members(cluster)) chosen[static_cast<std::size_t>(m)] = 1;
    }
    for (jcmap::NodeId i = 1; i <= g.node_count(); ++i)
      if (chosen[static_cast<std::size_t>(i)]) ids.push_back(i);
  } else {
    std::istringstream list(spec);
    std::string token;
    while (std::getline(list, token, ',')) {
      try {
        ids.push_back(static_cast<jcmap::NodeId>(std::stoi(token)));
      } catch (...) {
        throw DataError("invalid node id '" + token + "'");
      }
    }
  }
  if (ids.empty()) throw DataError("empty id selection");
  return ids;
}

void print_association(const jcmap::AssociationReport& rep, std::ostream& out) {
  out << "contingency (" << rep.contingency.size() << " x "
      << (rep.contingency.empty() ? 0 : rep.contingency.front().size()) << "):\n";
  for (const auto& row : rep.contingency) {
    for (auto cell : row) out << "\t" << cell;
    out << "\n";
  }
  out << "n\t" << rep.n << "\n";
  out << "chi-square\t" << fmt(rep.chi_square, 6) << "\n";
  out << "df\t" << rep.degrees_of_freedom << "\n";
  out << "cramers-v\t" << fmt(rep.cramers_v, 6) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jcmap: classification and maps from aggregated journal-journal citations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", jcmap::kVersion);
  app.set_config("--config", "", "plain-text key = value configuration; flags take precedence");

  int threads = 1;
  app.add_option("--threads", threads, "worker cap for independent runs (results unaffected)")
      ->envname("JCMAP_THREADS")
      ->check(CLI::PositiveNumber);
  std::string manifest_override;
  app.add_option("--manifest", manifest_override,
                 "manifest path (default: next to the first output)");

  // --- stats ---------------------------------------------------------------
  auto* cmd_stats = app.add_subcommand("stats", "network characteristics of a .net file");
  std::string stats_in;
  bool stats_machine = false;
  cmd_stats->add_option("input", stats_in, "Pajek .net file")->required();
  cmd_stats->add_flag("--machine", stats_machine, "key=value output");

  // --- clean ---------------------------------------------------------------
  auto* cmd_clean = app.add_subcommand("clean", "remove loops and weak citation links");
  std::string clean_in, clean_out;
  std::int64_t clean_min_weight = 0;
  bool clean_keep_loops = false;
  cmd_clean->add_option("input", clean_in)->required();
  cmd_clean->add_option("--min-weight", clean_min_weight, "drop arcs with weight below this")
      ->check(CLI::PositiveNumber);
  cmd_clean->add_flag("--keep-loops", clean_keep_loops);
  cmd_clean->add_option("-o,--output", clean_out)->required();

  // --- component -----------------------------------------------------------
  auto* cmd_comp = app.add_subcommand("component", "extract the largest weak component");
  std::string comp_in, comp_out, comp_mapping;
  cmd_comp->add_option("input", comp_in)->required();
  cmd_comp->add_option("-o,--output", comp_out)->required();
  cmd_comp->add_option("--mapping", comp_mapping, "CSV of new id, original id, label");

  // --- extract -------------------------------------------------------------
  auto* cmd_extract = app.add_subcommand("extract", "induced subnetwork of partition clusters");
  std::string extract_in, extract_clu, extract_out, extract_clusters;
  cmd_extract->add_option("input", extract_in)->required();
  cmd_extract->add_option("partition", extract_clu, "Pajek .clu over the input network")->required();
  cmd_extract->add_option("--cluster", extract_clusters, "cluster id or comma list (union)")
      ->required();
  cmd_extract->add_option("-o,--output", extract_out)->required();

  // --- cluster ---------------------------------------------------------------
  auto* cmd_cluster = app.add_subcommand("cluster", "seeded community detection");
  std::string cluster_in, cluster_out, cluster_method = "louvain";
  std::uint64_t cluster_seed = 1;
  double cluster_resolution = 1.0;
  int cluster_restarts = 1;
  cmd_cluster->add_option("input", cluster_in)->required();
  cmd_cluster->add_option("--method", cluster_method)->check(CLI::IsMember({"louvain", "vos"}));
  cmd_cluster->add_option("--seed", cluster_seed);
  cmd_cluster->add_option("--resolution", cluster_resolution);
  cmd_cluster->add_option("--restarts", cluster_restarts);
  cmd_cluster->add_option("-o,--output", cluster_out, "Pajek .clu")->required();

  // --- tree ------------------------------------------------------------------
  auto* cmd_tree = app.add_subcommand("tree", "recursive decomposition into a classification");
  std::string tree_in, tree_out, tree_method = "louvain", tree_singletons = "set-aside";
  std::uint64_t tree_seed = 1;
  double tree_resolution = 1.0;
  jcmap::NodeId tree_min_size = 10;
  int tree_max_depth = 5;
  cmd_tree->add_option("input", tree_in)->required();
  cmd_tree->add_option("--method", tree_method)->check(CLI::IsMember({"louvain", "vos"}));
  cmd_tree->add_option("--seed", tree_seed);
  cmd_tree->add_option("--resolution", tree_resolution);
  cmd_tree->add_option("--min-size", tree_min_size);
  cmd_tree->add_option("--max-depth", tree_max_depth);
  cmd_tree->add_option("--singletons", tree_singletons)
      ->check(CLI::IsMember({"set-aside", "keep"}));
  cmd_tree->add_option("-o,--output", tree_out, "output directory")->required();

  // --- compare ---------------------------------------------------------------
  auto* cmd_compare = app.add_subcommand("compare", "association between two partitions");
  std::string compare_a, compare_b, compare_net_a, compare_net_b, compare_csv;
  bool compare_intersect = false;
  cmd_compare->add_option("partition-a", compare_a)->required();
  cmd_compare->add_option("partition-b", compare_b)->required();
  cmd_compare->add_flag("--intersect", compare_intersect,
                        "restrict to journals shared by both networks");
  cmd_compare->add_option("--net-a", compare_net_a, "network behind partition-a (for labels)");
  cmd_compare->add_option("--net-b", compare_net_b, "network behind partition-b (for labels)");
  cmd_compare->add_option("--csv", compare_csv, "write the contingency table as CSV");

  // --- stability ---------------------------------------------------------------
  auto* cmd_stab = app.add_subcommand("stability", "multi-seed clustering agreement");
  std::string stab_in, stab_method = "louvain";
  int stab_runs = 5;
  std::uint64_t stab_seed = 1;
  double stab_resolution = 1.0;
  cmd_stab->add_option("input", stab_in)->required();
  cmd_stab->add_option("--method", stab_method)->check(CLI::IsMember({"louvain", "vos"}));
  cmd_stab->add_option("--runs", stab_runs)->check(CLI::Range(2, 1000));
  cmd_stab->add_option("--seed", stab_seed, "first seed; runs use seed, seed+1, ...");
  cmd_stab->add_option("--resolution", stab_resolution);

  // --- layout ---------------------------------------------------------------
  auto* cmd_layout = app.add_subcommand("layout", "2-D coordinates for map export");
  std::string layout_in, layout_out, layout_method = "vos";
  std::uint64_t layout_seed = 1;
  int layout_iterations = 1000;
  cmd_layout->add_option("input", layout_in)->required();
  cmd_layout->add_option("--method", layout_method)->check(CLI::IsMember({"vos", "kk"}));
  cmd_layout->add_option("--seed", layout_seed);
  cmd_layout->add_option("--max-iterations", layout_iterations);
  cmd_layout->add_option("-o,--output", layout_out, "tab-separated id/x/y")->required();

  // --- export-map ------------------------------------------------------------
  auto* cmd_map = app.add_subcommand("export-map", "VOSviewer map (and network) files");
  std::string map_in, map_clu, map_coords, map_out, map_net_out;
  cmd_map->add_option("input", map_in)->required();
  cmd_map->add_option("partition", map_clu)->required();
  cmd_map->add_option("coords", map_coords)->required();
  cmd_map->add_option("-o,--output", map_out, "map text file")->required();
  cmd_map->add_option("--network", map_net_out, "companion network text file");

  // --- submatrix ---------------------------------------------------------------
  auto* cmd_sub = app.add_subcommand("submatrix", "square citation CSV for selected journals");
  std::string sub_in, sub_out, sub_ids;
  cmd_sub->add_option("input", sub_in)->required();
  cmd_sub->add_option("--ids", sub_ids, "id list '1,5,9' or clu:<file>:<cluster list>")
      ->required();
  cmd_sub->add_option("-o,--output", sub_out)->required();

  // --- synth ---------------------------------------------------------------
  auto* cmd_synth = app.add_subcommand("synth", "planted-partition benchmark graph");
  jcmap::PlantedSpec synth_spec;
  synth_spec.n_nodes = 100;
  synth_spec.n_blocks = 4;
  synth_spec.p_in = 0.3;
  synth_spec.p_out = 0.01;
  std::string synth_out, synth_truth;
  cmd_synth->add_option("--nodes", synth_spec.n_nodes)->required();
  cmd_synth->add_option("--blocks", synth_spec.n_blocks)->required();
  cmd_synth->add_option("--p-in", synth_spec.p_in)->required();
  cmd_synth->add_option("--p-out", synth_spec.p_out)->required();
  cmd_synth->add_option("--seed", synth_spec.seed);
  cmd_synth->add_option("--weight-min", synth_spec.weight_min);
  cmd_synth->add_option("--weight-max", synth_spec.weight_max);
  cmd_synth->add_option("-o,--output", synth_out, "Pajek .net")->required();
  cmd_synth->add_option("--truth", synth_truth, "ground-truth .clu (default: output stem + .clu)");

  // --- ingest ---------------------------------------------------------------
  auto* cmd_ingest = app.add_subcommand("ingest", "build a .net from cited,citing,count CSV");
  std::string ingest_in, ingest_out, ingest_header = "auto";
  cmd_ingest->add_option("input", ingest_in)->required();
  cmd_ingest->add_option("--header", ingest_header)->check(CLI::IsMember({"auto", "none", "skip"}));
  cmd_ingest->add_option("-o,--output", ingest_out)->required();

  // global options (--threads, --manifest, --config) may follow a subcommand
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  RunRecorder rec;
  rec.manifest_path = manifest_override;
  for (int i = 1; i < argc; ++i) rec.replay.emplace_back(argv[i]);

  try {
    if (cmd_stats->parsed()) {
      rec.command = "stats";
      rec.inputs = {stats_in};
      const auto raw = load_net(stats_in);
      const auto [graph, n_loops] = remove_loops(raw);
      const auto stats = network_stats(graph);
      const auto comps = jcmap::components(graph);
      std::size_t isolated = count_isolated_nodes(graph);

      std::string sizes;  // all component sizes, largest first, capped
      for (std::size_t i = 0; i < comps.size() && i < 20; ++i)
        sizes += (i ? "," : "") + std::to_string(comps[i].size());
      if (comps.size() > 20) sizes += ",...";

      if (stats_machine) {
        std::cout << "nodes=" << stats.n_nodes << "\n"
                  << "links=" << stats.n_links << "\n"
                  << "loops_removed=" << n_loops << "\n"
                  << "density=" << fmt(stats.density, 12) << "\n"
                  << "average_out_degree=" << fmt(stats.average_out_degree, 12) << "\n"
                  << "average_total_degree=" << fmt(stats.average_total_degree, 12) << "\n"
                  << "clustering_coefficient=" << fmt(stats.clustering_coefficient, 12) << "\n"
                  << "components=" << comps.size() << "\n"
                  << "largest_component=" << (comps.empty() ? 0 : comps.front().size()) << "\n"
                  << "component_sizes=" << sizes << "\n"
                  << "isolated_nodes=" << isolated << "\n";
      } else {
        std::cout << "nodes                  " << stats.n_nodes << "\n"
                  << "links                  " << stats.n_links << "\n"
                  << "loops removed          " << n_loops << "\n"
                  << "density                " << fmt(stats.density, 4) << "\n"
                  << "average out-degree     " << fmt(stats.average_out_degree, 3) << "\n"
                  << "average total degree   " << fmt(stats.average_total_degree, 3) << "\n"
                  << "clustering coefficient " << fmt(stats.clustering_coefficient, 3) << "\n"
                  << "components             " << comps.size() << " (sizes: " << sizes << ")\n"
                  << "largest component      " << (comps.empty() ? 0 : comps.front().size())
                  << "\n";
        if (stats.density_warning) std::cerr << "warning: density undefined for n < 2\n";
      }
      rec.parameters = {{"input", stats_in}, {"loops_removed", n_loops}};
      rec.write();
    } else if (cmd_clean->parsed()) {
      rec.command = "clean";
      rec.inputs = {clean_in};
      auto graph = load_net(clean_in);
      jcmap::CleaningReport report;
      if (!clean_keep_loops) {
        auto [g2, removed] = remove_loops(graph);
        graph = std::move(g2);
        report.loops_removed = removed;
      }
      if (clean_min_weight > 0) {
        auto [g2, removed] = filter_min_weight(graph, clean_min_weight);
        graph = std::move(g2);
        report.arcs_removed_by_threshold = removed;
      }
      report.nodes_isolated_after_cleaning = count_isolated_nodes(graph);
      write_file(clean_out, jcmap::write_net(graph));
      std::cerr << "loops removed: " << report.loops_removed
                << ", arcs below threshold: " << report.arcs_removed_by_threshold
                << ", isolated nodes after cleaning: " << report.nodes_isolated_after_cleaning
                << "\n";
      rec.parameters = {{"input", clean_in},
                        {"min_weight", clean_min_weight},
                        {"keep_loops", clean_keep_loops},
                        {"loops_removed", report.loops_removed},
                        {"arcs_removed_by_threshold", report.arcs_removed_by_threshold},
                        {"nodes_isolated_after_cleaning", report.nodes_isolated_after_cleaning}};
      rec.replay = {"clean", clean_in};
      if (clean_min_weight > 0) {
        rec.replay.push_back("--min-weight");
        rec.replay.push_back(std::to_string(clean_min_weight));
      }
      if (clean_keep_loops) rec.replay.push_back("--keep-loops");
      rec.replay.push_back("-o");
      rec.replay.push_back(clean_out);
      rec.outputs = {clean_out};
      rec.write();
    } else if (cmd_comp->parsed()) {
      rec.command = "component";
      rec.inputs = {comp_in};
      const auto graph = load_net(comp_in);
      const auto lc = largest_component(graph);
      write_file(comp_out, jcmap::write_net(lc.graph));
      std::cerr << "kept " << lc.graph.node_count() << " of " << graph.node_count()
                << " nodes\n";
      rec.outputs = {comp_out};
      if (!comp_mapping.empty()) {
        std::string csv = "new_id,original_id,label\n";
        for (std::size_t i = 0; i < lc.original_ids.size(); ++i)
          csv += std::to_string(i + 1) + "," + std::to_string(lc.original_ids[i]) + "," +
                 graph.label(lc.original_ids[i]) + "\n";
        write_file(comp_mapping, csv);
        rec.outputs.push_back(comp_mapping);
      }
      rec.parameters = {{"input", comp_in},
                        {"nodes_kept", lc.graph.node_count()},
                        {"nodes_total", graph.node_count()}};
      rec.write();
    } else if (cmd_extract->parsed()) {
      rec.command = "extract";
      rec.inputs = {extract_in, extract_clu};
      const auto graph = load_net(extract_in);
      const auto ids = parse_id_spec("clu:" + extract_clu + ":" + extract_clusters, graph);
      const auto sub = jcmap::induced_subgraph(graph, ids);
      write_file(extract_out, jcmap::write_net(sub.graph));
      std::cerr << "extracted " << sub.graph.node_count() << " nodes, "
                << sub.graph.arc_count() << " arcs\n";
      rec.parameters = {{"input", extract_in},
                        {"partition", extract_clu},
                        {"clusters", extract_clusters},
                        {"nodes", sub.graph.node_count()}};
      rec.outputs = {extract_out};
      rec.write();
    } else if (cmd_cluster->parsed()) {
      rec.command = "cluster";
      rec.inputs = {cluster_in};
      const auto raw = load_net(cluster_in);
      const auto graph = drop_loops_logged(raw, rec);
      const auto sym = symmetrize(graph);
      jcmap::ClusterConfig cfg;
      cfg.method = jcmap::parse_method(cluster_method);
      cfg.seed = cluster_seed;
      cfg.resolution = cluster_resolution;
      cfg.local_moving_restarts = cluster_restarts;
      const auto [partition, quality] = jcmap::cluster(sym, cfg);
      write_file(cluster_out, jcmap::write_clu(partition));
      std::cerr << "clusters: " << partition.cluster_count()
                << " (singletons: " << partition.singleton_ids().size() << ")"
                << ", quality (" << cluster_method << "): " << fmt(quality.value, 6) << "\n";
      rec.parameters.update({{"input", cluster_in},
                             {"method", cluster_method},
                             {"seed", cluster_seed},
                             {"resolution", cluster_resolution},
                             {"restarts", cluster_restarts},
                             {"clusters", partition.cluster_count()},
                             {"quality", quality.value}});
      rec.replay = {"cluster",       cluster_in,
                    "--method",      cluster_method,
                    "--seed",        std::to_string(cluster_seed),
                    "--resolution",  fmt(cluster_resolution, 6),
                    "--restarts",    std::to_string(cluster_restarts),
                    "-o",            cluster_out};
      rec.outputs = {cluster_out};
      rec.write();
    } else if (cmd_tree->parsed()) {
      rec.command = "tree";
      rec.inputs = {tree_in};
      const auto graph = load_net(tree_in);
      jcmap::DecomposeConfig cfg;
      cfg.method = jcmap::parse_method(tree_method);
      cfg.root_seed = tree_seed;
      cfg.resolution = tree_resolution;
      cfg.min_size = tree_min_size;
      cfg.max_depth = tree_max_depth;
      cfg.singleton_policy = tree_singletons == "keep" ? jcmap::SingletonPolicy::keep
                                                       : jcmap::SingletonPolicy::set_aside;
      const auto tree = decompose(graph, cfg);

      const fs::path dir(tree_out);
      fs::create_directories(dir);
      rec.manifest_path = manifest_override.empty() ? (dir / "manifest.json").string()
                                                    : manifest_override;

      // the component network the per-level partitions index
      const auto lc = largest_component(remove_loops(graph).first);
      write_file((dir / "component.net").string(), jcmap::write_net(lc.graph));
      write_file((dir / "outline.txt").string(), jcmap::tree_to_outline(tree));
      write_file((dir / "tree.json").string(), jcmap::tree_to_json(tree));
      rec.outputs = {(dir / "component.net").string(), (dir / "outline.txt").string(),
                     (dir / "tree.json").string()};
      for (int depth = 1; depth <= std::max(tree.height, 1); ++depth) {
        const auto p = tree_to_partition(tree, depth);
        const auto path = (dir / ("level-" + std::to_string(depth) + ".clu")).string();
        write_file(path, jcmap::write_clu(p));
        rec.outputs.push_back(path);
      }
      std::cerr << "tree height " << tree.height << ", top-level clusters "
                << tree.root.children.size() << " (+" << tree.root.singletons_set_aside.size()
                << " singletons), loops removed " << tree.loops_removed << "\n";
      rec.parameters = {{"input", tree_in},
                        {"method", tree_method},
                        {"seed", tree_seed},
                        {"resolution", tree_resolution},
                        {"min_size", tree_min_size},
                        {"max_depth", tree_max_depth},
                        {"singletons", tree_singletons},
                        {"height", tree.height}};
      rec.replay = {"tree",          tree_in,
                    "--method",      tree_method,
                    "--seed",        std::to_string(tree_seed),
                    "--resolution",  fmt(tree_resolution, 6),
                    "--min-size",    std::to_string(tree_min_size),
                    "--max-depth",   std::to_string(tree_max_depth),
                    "--singletons",  tree_singletons,
                    "-o",            tree_out};
      rec.write();
    } else if (cmd_compare->parsed()) {
      rec.command = "compare";
      rec.inputs = {compare_a, compare_b};
      auto pa = load_clu(compare_a);
      auto pb = load_clu(compare_b);

      if (!compare_net_a.empty() || !compare_net_b.empty()) {
        if (compare_net_a.empty() || compare_net_b.empty())
          throw DataError("--net-a and --net-b must be given together");
        rec.inputs.push_back(compare_net_a);
        rec.inputs.push_back(compare_net_b);
        const auto ga = load_net(compare_net_a);
        const auto gb = load_net(compare_net_b);
        if (ga.node_count() != pa.size() || gb.node_count() != pb.size())
          throw DataError("partition sizes do not match their networks");

        auto label_index = [](const jcmap::CitationGraph& g, const std::string& which) {
          std::map<std::string, jcmap::NodeId> index;
          for (jcmap::NodeId i = 1; i <= g.node_count(); ++i) {
            if (!index.emplace(g.label(i), i).second)
              throw DataError("duplicate label '" + g.label(i) + "' in " + which +
                              " prevents label matching");
          }
          return index;
        };
        const auto ia = label_index(ga, compare_net_a);
        const auto ib = label_index(gb, compare_net_b);

        std::vector<int> ra, rb;
        std::size_t only_a = 0, only_b = 0;
        for (const auto& [label, id_a] : ia) {
          const auto it = ib.find(label);
          if (it == ib.end()) {
            ++only_a;
            continue;
          }
          ra.push_back(pa.cluster_of(id_a));
          rb.push_back(pb.cluster_of(it->second));
        }
        only_b = ib.size() - ra.size();
        if ((only_a > 0 || only_b > 0) && !compare_intersect)
          throw DataError("node sets differ (symmetric difference of size " +
                          std::to_string(only_a + only_b) + "); use --intersect to compare " +
                          "the shared journals");
        if (only_a > 0 || only_b > 0)
          std::cerr << "note: intersect dropped " << only_a << " journals from A and " << only_b
                    << " from B\n";
        pa = jcmap::Partition::from_assignment(ra);
        pb = jcmap::Partition::from_assignment(rb);
      } else if (pa.size() != pb.size()) {
        throw DataError("partitions have different sizes (" + std::to_string(pa.size()) +
                        " vs " + std::to_string(pb.size()) +
                        "); supply --net-a/--net-b with --intersect to match by label");
      }

      const auto rep = association(pa, pb);
      print_association(rep, std::cout);
      if (!compare_csv.empty()) {
        std::string csv;
        for (const auto& row : rep.contingency) {
          for (std::size_t j = 0; j < row.size(); ++j)
            csv += (j ? "," : "") + std::to_string(row[j]);
          csv += "\n";
        }
        write_file(compare_csv, csv);
        rec.outputs.push_back(compare_csv);
      }
      rec.parameters = {{"partition_a", compare_a},
                        {"partition_b", compare_b},
                        {"intersect", compare_intersect},
                        {"chi_square", rep.chi_square},
                        {"cramers_v", rep.cramers_v}};
      rec.write();
    } else if (cmd_stab->parsed()) {
      rec.command = "stability";
      rec.inputs = {stab_in};
      const auto raw = load_net(stab_in);
      const auto graph = drop_loops_logged(raw, rec);
      const auto sym = symmetrize(graph);
      std::vector<std::uint64_t> seeds;
      for (int r = 0; r < stab_runs; ++r) seeds.push_back(stab_seed + static_cast<std::uint64_t>(r));
      const auto rep = stability(sym, jcmap::parse_method(stab_method), stab_resolution, seeds,
                                 threads);
      std::cout << "run\tseed\tclusters\n";
      for (std::size_t i = 0; i < seeds.size(); ++i)
        std::cout << i + 1 << "\t" << seeds[i] << "\t" << rep.cluster_counts[i] << "\n";
      std::cout << "pairwise cramers-v:";
      for (double v : rep.pairwise_v) std::cout << " " << fmt(v, 4);
      std::cout << "\nmean\t" << fmt(rep.mean_v, 4) << "\nsd\t" << fmt(rep.sd_v, 4) << "\n";
      rec.parameters.update({{"input", stab_in},
                             {"method", stab_method},
                             {"runs", stab_runs},
                             {"first_seed", stab_seed},
                             {"seeds", seeds},
                             {"resolution", stab_resolution},
                             {"mean_v", rep.mean_v},
                             {"sd_v", rep.sd_v}});
      rec.write();
    } else if (cmd_layout->parsed()) {
      rec.command = "layout";
      rec.inputs = {layout_in};
      const auto raw = load_net(layout_in);
      const auto graph = drop_loops_logged(raw, rec);
      const auto sym = symmetrize(graph);
      const auto layout = layout_method == "kk"
                              ? jcmap::kamada_kawai(sym, layout_seed, layout_iterations)
                              : jcmap::vos_layout(sym, layout_seed, layout_iterations);
      write_file(layout_out, jcmap::write_coords(layout));
      std::cerr << "objective " << fmt(layout.objective_value, 6) << " after "
                << layout.iterations_used << " iterations\n";
      rec.parameters.update({{"input", layout_in},
                             {"method", layout_method},
                             {"seed", layout_seed},
                             {"max_iterations", layout_iterations},
                             {"objective", layout.objective_value},
                             {"iterations_used", layout.iterations_used}});
      rec.replay = {"layout",           layout_in,
                    "--method",         layout_method,
                    "--seed",           std::to_string(layout_seed),
                    "--max-iterations", std::to_string(layout_iterations),
                    "-o",               layout_out};
      rec.outputs = {layout_out};
      rec.write();
    } else if (cmd_map->parsed()) {
      rec.command = "export-map";
      rec.inputs = {map_in, map_clu, map_coords};
      const auto raw = load_net(map_in);
      const auto graph = drop_loops_logged(raw, rec);
      const auto sym = symmetrize(graph);
      const auto partition = load_clu(map_clu, sym.node_count());
      const auto coords = jcmap::parse_coords(read_file(map_coords), sym.node_count());
      write_file(map_out, jcmap::write_vos_map(sym, partition, coords));
      rec.outputs = {map_out};
      if (!map_net_out.empty()) {
        write_file(map_net_out, jcmap::write_vos_network(sym));
        rec.outputs.push_back(map_net_out);
      }
      rec.parameters.update(
          {{"input", map_in}, {"partition", map_clu}, {"coords", map_coords}});
      rec.write();
    } else if (cmd_sub->parsed()) {
      rec.command = "submatrix";
      rec.inputs = {sub_in};
      const auto graph = load_net(sub_in);
      const auto ids = parse_id_spec(sub_ids, graph);
      write_file(sub_out, jcmap::export_submatrix_csv(graph, ids));
      std::cerr << "submatrix of " << ids.size() << " journals\n";
      rec.parameters = {{"input", sub_in}, {"ids", sub_ids}, {"selected", ids.size()}};
      rec.outputs = {sub_out};
      rec.write();
    } else if (cmd_synth->parsed()) {
      rec.command = "synth";
      const auto [graph, truth] = planted_partition(synth_spec);
      write_file(synth_out, jcmap::write_net(graph));
      std::string truth_path = synth_truth;
      if (truth_path.empty()) truth_path = fs::path(synth_out).replace_extension(".clu").string();
      write_file(truth_path, jcmap::write_clu(truth));
      std::cerr << "generated " << graph.node_count() << " nodes, " << graph.arc_count()
                << " arcs in " << synth_spec.n_blocks << " blocks\n";
      rec.parameters = {{"nodes", synth_spec.n_nodes},   {"blocks", synth_spec.n_blocks},
                        {"p_in", synth_spec.p_in},       {"p_out", synth_spec.p_out},
                        {"seed", synth_spec.seed},       {"weight_min", synth_spec.weight_min},
                        {"weight_max", synth_spec.weight_max}};
      rec.replay = {"synth",
                    "--nodes", std::to_string(synth_spec.n_nodes),
                    "--blocks", std::to_string(synth_spec.n_blocks),
                    "--p-in", fmt(synth_spec.p_in, 6),
                    "--p-out", fmt(synth_spec.p_out, 6),
                    "--seed", std::to_string(synth_spec.seed),
                    "--weight-min", std::to_string(synth_spec.weight_min),
                    "--weight-max", std::to_string(synth_spec.weight_max),
                    "-o", synth_out,
                    "--truth", truth_path};
      rec.outputs = {synth_out, truth_path};
      rec.write();
    } else if (cmd_ingest->parsed()) {
      rec.command = "ingest";
      rec.inputs = {ingest_in};
      jcmap::CsvOptions options;
      if (ingest_header == "none") options.header = jcmap::CsvHeader::none;
      if (ingest_header == "skip") options.header = jcmap::CsvHeader::skip_first;
      const auto result = jcmap::ingest_csv(read_file(ingest_in), options);
      write_file(ingest_out, jcmap::write_net(result.graph));
      std::cerr << "ingested " << result.graph.node_count() << " journals, "
                << result.graph.arc_count() << " cells";
      if (result.duplicate_pairs > 0)
        std::cerr << " (" << result.duplicate_pairs << " duplicate pairs summed)";
      std::cerr << "\n";
      rec.parameters = {{"input", ingest_in},
                        {"header", ingest_header},
                        {"duplicate_pairs", result.duplicate_pairs}};
      rec.outputs = {ingest_out};
      rec.write();
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jcmap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
