#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtsim/clustering.hpp"
#include "mtsim/importance.hpp"
#include "mtsim/io.hpp"
#include "mtsim/models.hpp"
#include "mtsim/pipeline.hpp"
#include "mtsim/similarity.hpp"
#include "mtsim/synth.hpp"

namespace fs = std::filesystem;
using namespace mtsim;

namespace {

// Settings resolve as: command-line flag > MTSIM_* environment variable >
// config-file key > built-in default.
class ConfigSource {
 public:
  void load_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file '" + path.string() + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("config file line " + std::to_string(lineno) +
                              ": expected key=value");
      }
      file_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }

  static std::string env_key(const std::string& key) {
    std::string out = "MTSIM_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(c));
    return out;
  }

  std::optional<std::string> get(const std::string& key) const {
    if (const char* e = std::getenv(env_key(key).c_str()); e != nullptr && *e != '\0') {
      return std::string(e);
    }
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    return std::nullopt;
  }

 private:
  std::map<std::string, std::string> file_;
};

template <typename T>
void apply_setting(const CLI::Option* opt, const ConfigSource& cfg, const std::string& key,
                   T& target) {
  if (opt != nullptr && opt->count() > 0) return;
  const auto v = cfg.get(key);
  if (!v) return;
  if constexpr (std::is_same_v<T, bool>) {
    target = *v == "1" || *v == "true" || *v == "yes" || *v == "on";
  } else if constexpr (std::is_same_v<T, std::string>) {
    target = *v;
  } else {
    T parsed{};
    if (!CLI::detail::lexical_cast(*v, parsed)) {
      throw ValidationError("setting '" + key + "': cannot parse value '" + *v + "'");
    }
    target = parsed;
  }
}

std::string pretty(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string out = ".";
  std::uint64_t seed = 42;
  std::size_t n = 10000;
  bool with_degraded = false;
};

int run_gen(const GenArgs& args) {
  const fs::path out_dir(args.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) {
    throw ValidationError("cannot create output directory '" + out_dir.string() + "'");
  }
  const std::vector<TaskSpec> specs = synthetic_suite(args.seed, args.n, args.with_degraded);
  Manifest manifest;
  manifest.base_seed = args.seed;
  manifest.n = args.n;
  manifest.specs = specs;
  if (args.with_degraded) manifest.degraded_task_ids = {"task_6"};
  for (const auto& spec : specs) {
    const TaskDataset data = generate_task(spec);
    const fs::path path = out_dir / (spec.task_id + ".csv");
    write_dataset_csv(data, path);
    std::cout << "wrote " << path.string() << " (" << data.n() << " rows)\n";
  }
  write_manifest(manifest, out_dir / "manifest.json");
  std::cout << "wrote " << (out_dir / "manifest.json").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- ale

struct AleArgs {
  std::vector<std::string> inputs;
  std::string model = "knn";
  std::string manifest_path;
  std::size_t knn_k = 0;  // 0 = max(5, n/100)
  std::size_t raw_k = 50;
  std::size_t grid_k = 50;
  bool smooth = false;
  double smooth_lambda = 10.0;
  bool smooth_lambda_given = false;
  std::string importance = "pfi";
  std::size_t pfi_repeats = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out = "curves.json";
};

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw ValidationError("input '" + input + "' is neither a file nor a directory");
    }
  }
  if (files.empty()) throw ValidationError("no dataset CSV files found");
  return files;
}

void report_degenerate_features(const std::vector<TaskDataset>& tasks) {
  std::vector<std::string> degenerate;
  for (const auto& task : tasks) {
    for (std::size_t j = 0; j < task.d(); ++j) {
      const auto col = task.column(j);
      const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
      if (!(*mn < *mx)) {
        degenerate.push_back(task.task_id() + "/" + task.feature_names()[j]);
      }
    }
  }
  if (!degenerate.empty()) {
    std::string msg = "degenerate (constant) features:";
    for (const auto& name : degenerate) msg += " " + name;
    throw ValidationError(msg);
  }
}

int run_ale(const AleArgs& args) {
  const std::vector<fs::path> files = expand_inputs(args.inputs);
  std::vector<TaskDataset> tasks;
  tasks.reserve(files.size());
  for (const auto& file : files) tasks.push_back(read_dataset_csv(file));
  report_degenerate_features(tasks);

  std::vector<Predictor> models;
  if (args.model == "oracle") {
    fs::path manifest_path(args.manifest_path);
    if (manifest_path.empty()) {
      const fs::path first = files.front().parent_path();
      manifest_path = first / "manifest.json";
    }
    if (!fs::exists(manifest_path)) {
      throw ValidationError("oracle model needs a manifest; not found at '" +
                            manifest_path.string() + "'");
    }
    const Manifest manifest = read_manifest(manifest_path);
    for (const auto& task : tasks) {
      auto it = std::find_if(manifest.specs.begin(), manifest.specs.end(),
                             [&](const TaskSpec& s) { return s.task_id == task.task_id(); });
      if (it == manifest.specs.end()) {
        throw ValidationError("no spec for task '" + task.task_id() + "' in manifest");
      }
      const bool degraded =
          std::find(manifest.degraded_task_ids.begin(), manifest.degraded_task_ids.end(),
                    task.task_id()) != manifest.degraded_task_ids.end();
      models.push_back(degraded ? degraded_model(*it, task) : oracle_model(*it));
    }
  } else if (args.model == "knn") {
    for (const auto& task : tasks) {
      const std::size_t k = args.knn_k > 0 ? args.knn_k : default_k(task.n());
      models.push_back(fit_knn(task, k));
    }
  } else {
    throw ValidationError("unknown model '" + args.model + "' (expected oracle or knn)");
  }

  ProfileOptions options;
  options.raw_k = args.raw_k;
  options.grid_k = args.grid_k;
  if (args.smooth || args.smooth_lambda_given) options.smooth_lambda = args.smooth_lambda;
  options.importance = importance_source_from_string(args.importance);
  options.pfi_repeats = args.pfi_repeats;
  options.pfi_seed = args.seed;
  options.threads = args.threads;

  Bundle bundle;
  bundle.profiles = build_profiles(tasks, models, options);
  bundle.importance_source = args.importance;
  bundle.raw_k = args.raw_k;
  bundle.grid_k = args.grid_k;
  bundle.smooth_lambda = options.smooth_lambda;
  write_bundle(bundle, args.out);
  std::cout << "wrote " << args.out << " (" << bundle.profiles.size() << " tasks)\n";
  return 0;
}

// ---------------------------------------------------------------- sim

struct SimArgs {
  std::string bundle;
  std::string importance = "pfi";
  std::string importance_file;
  std::string matching = "by_name";
  bool gamma = false;
  std::string tau = "median";
  unsigned threads = 1;
  std::string out_dir = ".";
};

std::map<std::string, double> read_weights_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open importance file '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("'" + path.string() + "' is empty");
  std::map<std::string, double> weights;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("'" + path.string() + "' line " + std::to_string(lineno) +
                            ": expected feature,weight");
    }
    try {
      weights[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ValidationError("'" + path.string() + "' line " + std::to_string(lineno) +
                            ": cannot parse weight");
    }
  }
  return weights;
}

int run_sim(const SimArgs& args) {
  if (args.bundle.empty()) throw ValidationError("sim: --bundle is required");
  Bundle bundle = read_bundle(args.bundle);
  if (bundle.profiles.size() < 2) {
    throw ValidationError("sim: bundle holds " + std::to_string(bundle.profiles.size()) +
                          " tasks; need at least 2");
  }

  std::vector<TaskProfile> profiles = bundle.profiles;
  if (args.importance == "pfi") {
    if (bundle.importance_source != "pfi") {
      throw ValidationError("sim: bundle stores '" + bundle.importance_source +
                            "' importances; rebuild with `ale --importance pfi`");
    }
  } else if (args.importance == "uniform") {
    for (auto& p : profiles) {
      std::map<std::string, double> uniform;
      for (const auto& [name, curve] : p.curves()) {
        uniform[name] = 1.0 / static_cast<double>(p.curves().size());
      }
      p = p.with_importance(std::move(uniform));
    }
  } else if (args.importance == "file") {
    if (args.importance_file.empty()) {
      throw ValidationError("sim: --importance file needs --importance-file");
    }
    const auto weights = read_weights_csv(args.importance_file);
    for (auto& p : profiles) {
      std::map<std::string, double> subset;
      for (const auto& [name, curve] : p.curves()) {
        if (auto it = weights.find(name); it != weights.end()) subset[name] = it->second;
      }
      if (subset.size() != p.curves().size()) {
        throw ValidationError("sim: importance file misses features of task '" + p.task_id() +
                              "'");
      }
      p = p.with_importance(manual_importance(subset));
    }
  } else {
    throw ValidationError("unknown importance source '" + args.importance +
                          "' (expected pfi, uniform or file)");
  }

  // tau flags (need losses; the bundle carries them when a model was used).
  std::optional<double> tau;
  if (args.tau != "median") {
    try {
      tau = std::stod(args.tau);
    } catch (const std::exception&) {
      throw ValidationError("sim: --tau must be 'median' or a number, got '" + args.tau + "'");
    }
  }
  std::map<std::string, double> losses;
  bool all_losses = true;
  for (const auto& p : profiles) {
    if (p.loss()) {
      losses[p.task_id()] = *p.loss();
    } else {
      all_losses = false;
    }
  }
  std::map<std::string, bool> flags;
  if (all_losses) {
    flags = flag_unreliable(losses, tau);
    for (auto& p : profiles) p = p.with_flag(flags.at(p.task_id()));
  } else if (args.gamma) {
    throw ValidationError("sim: --gamma needs a loss for every task in the bundle");
  }
  if (args.gamma) {
    for (const auto& [id, loss] : losses) {
      if (loss <= 1e-12) {
        std::cerr << "warning: task '" << id << "' has (near-)zero loss; gamma = "
                  << "min(L,L')/(max(L,L')+eps) zeroes every scaled entry involving it\n";
      }
    }
  }

  const Matching matching = matching_from_string(args.matching);
  const SimilarityMatrix matrix = similarity_matrix(profiles, matching, args.gamma,
                                                    args.threads);

  std::vector<PairRow> rows;
  for (const auto& ref : profiles) {
    for (const auto& other : profiles) {
      if (ref.task_id() == other.task_id()) continue;
      for (const auto& fc : similarity_breakdown(ref, other, matching)) {
        rows.push_back({ref.task_id(), other.task_id(), fc.feature, fc.matched, fc.distance,
                        fc.importance, fc.weighted});
      }
    }
  }

  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  write_matrix_csv(matrix, out_dir / "matrix.csv");
  MatrixMeta meta;
  meta.matching = args.matching;
  meta.scaled = args.gamma;
  meta.tau = all_losses ? args.tau : "";
  meta.losses = losses;
  meta.flags = flags;
  write_matrix_meta(meta, out_dir / "matrix_meta.json");
  write_pairs_csv(rows, out_dir / "pairs.csv");
  std::cout << "wrote " << (out_dir / "matrix.csv").string() << ", matrix_meta.json, pairs.csv\n";
  return 0;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string matrix;
  std::size_t k = 2;
  std::string out_dir = ".";
};

int run_cluster(const ClusterArgs& args) {
  if (args.matrix.empty()) throw ValidationError("cluster: --matrix is required");
  const SimilarityMatrix raw = read_matrix_csv(args.matrix);
  const SimilarityMatrix sym = symmetrize(raw);
  const Dendrogram dendro = ward_cluster(sym);
  const auto labels = cut_tree(dendro, args.k);

  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  write_labels_csv(labels, sym.task_ids(), out_dir / "labels.csv");
  write_merges_csv(dendro, out_dir / "merges.csv");
  write_dendro_coords_csv(dendro, out_dir / "dendro_coords.csv");
  {
    std::ofstream os(out_dir / "dendrogram.newick");
    os << to_newick(dendro) << '\n';
  }
  std::cout << "wrote labels.csv, merges.csv, dendro_coords.csv, dendrogram.newick in "
            << out_dir.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string matrix;
  std::string pairs;
  std::string meta;
  std::string out = "report.md";
  std::size_t top = 3;
};

void describe_pair(std::ostream& os, const SimilarityMatrix& matrix,
                   const std::vector<PairRow>& rows, std::size_t i, std::size_t j,
                   std::size_t top) {
  const std::string& a = matrix.task_ids()[i];
  const std::string& b = matrix.task_ids()[j];
  os << "- delta_" << a << "(" << b << ") = " << pretty(matrix.value(i, j)) << ", delta_" << b
     << "(" << a << ") = " << pretty(matrix.value(j, i)) << "\n";
  std::vector<PairRow> selected;
  for (const auto& row : rows) {
    if (row.ref_task == a && row.other_task == b) selected.push_back(row);
  }
  if (selected.empty()) return;
  std::sort(selected.begin(), selected.end(),
            [](const PairRow& x, const PairRow& y) { return x.weighted > y.weighted; });
  os << "- top contributing features of " << a << ":\n\n";
  os << "  | feature | matched | distance | importance | contribution |\n";
  os << "  |---------|---------|----------|------------|--------------|\n";
  for (std::size_t r = 0; r < std::min(top, selected.size()); ++r) {
    const auto& row = selected[r];
    os << "  | " << row.feature << " | " << row.matched << " | " << pretty(row.distance)
       << " | " << pretty(row.importance) << " | " << pretty(row.weighted) << " |\n";
  }
  os << '\n';
}

int run_report(const ReportArgs& args) {
  if (args.matrix.empty()) throw ValidationError("report: --matrix is required");
  const SimilarityMatrix matrix = read_matrix_csv(args.matrix);
  if (matrix.size() < 2) throw ValidationError("report: need at least 2 tasks");

  std::vector<PairRow> rows;
  fs::path pairs_path(args.pairs);
  if (pairs_path.empty()) {
    const fs::path candidate = fs::path(args.matrix).parent_path() / "pairs.csv";
    if (fs::exists(candidate)) pairs_path = candidate;
  }
  if (!pairs_path.empty()) rows = read_pairs_csv(pairs_path);

  std::optional<MatrixMeta> meta;
  fs::path meta_path(args.meta);
  if (meta_path.empty()) {
    const fs::path candidate = fs::path(args.matrix).parent_path() / "matrix_meta.json";
    if (fs::exists(candidate)) meta_path = candidate;
  }
  if (!meta_path.empty()) meta = read_matrix_meta(meta_path);

  // Rank pairs on the symmetrized values.
  std::size_t lo_i = 0, lo_j = 1, hi_i = 0, hi_j = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      const double v = 0.5 * (matrix.value(i, j) + matrix.value(j, i));
      if (v < lo) {
        lo = v;
        lo_i = i;
        lo_j = j;
      }
      if (v > hi) {
        hi = v;
        hi_i = i;
        hi_j = j;
      }
    }
  }

  std::ofstream os(args.out);
  if (!os) throw ValidationError("cannot open '" + args.out + "' for writing");
  os << "# Multi-task similarity report\n\n";
  os << "Tasks: " << matrix.size() << ". Rows are the reference task t; entry (t, t') is "
     << "delta_t(t'); lower means more similar.\n\n";
  if (meta) {
    os << "Matching: " << meta->matching << ". Performance scaling: "
       << (meta->scaled ? "applied" : "not applied") << ".";
    if (!meta->tau.empty()) {
      os << " Reliability threshold tau = " << meta->tau << ".";
      std::vector<std::string> flagged;
      for (const auto& [id, f] : meta->flags) {
        if (f) flagged.push_back(id);
      }
      if (flagged.empty()) {
        os << " No task is flagged.";
      } else {
        os << " Flagged tasks (loss above tau):";
        for (const auto& id : flagged) os << ' ' << id;
        os << '.';
      }
    }
    os << "\n\n";
  }

  os << "## Most similar pair: " << matrix.task_ids()[lo_i] << " and " << matrix.task_ids()[lo_j]
     << " (mean delta " << pretty(lo) << ")\n\n";
  describe_pair(os, matrix, rows, lo_i, lo_j, args.top);
  os << "## Least similar pair: " << matrix.task_ids()[hi_i] << " and "
     << matrix.task_ids()[hi_j] << " (mean delta " << pretty(hi) << ")\n\n";
  describe_pair(os, matrix, rows, hi_i, hi_j, args.top);
  std::cout << "wrote " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task similarity from ALE curves and a weighted Frechet distance"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "plain key=value config file (lowest precedence)");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate the synthetic benchmark tasks");
  auto* gen_out = gen->add_option("--out", gen_args.out, "output directory");
  auto* gen_seed = gen->add_option("--seed", gen_args.seed, "base RNG seed");
  auto* gen_n = gen->add_option("--n", gen_args.n, "samples per task");
  auto* gen_deg = gen->add_flag("--with-degraded", gen_args.with_degraded,
                                "also emit task_6 (task 1 distribution, degraded model)");

  AleArgs ale_args;
  auto* ale = app.add_subcommand("ale", "compute ALE curves and write a curve bundle");
  ale->add_option("inputs", ale_args.inputs, "dataset CSV files or directories")->required();
  auto* ale_model = ale->add_option("--model", ale_args.model, "oracle or knn");
  auto* ale_manifest = ale->add_option("--manifest", ale_args.manifest_path,
                                       "manifest for oracle models (default: next to data)");
  auto* ale_knn_k = ale->add_option("--knn-k", ale_args.knn_k, "neighbours (0 = max(5, n/100))");
  auto* ale_raw_k = ale->add_option("--raw-k", ale_args.raw_k, "equal-width bins per raw curve");
  auto* ale_grid_k = ale->add_option("--grid-k", ale_args.grid_k, "common-grid quantile knots");
  auto* ale_smooth = ale->add_flag("--smooth", ale_args.smooth, "smooth resampled curves");
  auto* ale_lambda = ale->add_option("--smooth-lambda", ale_args.smooth_lambda,
                                     "roughness penalty (implies --smooth)");
  auto* ale_imp = ale->add_option("--importance", ale_args.importance, "pfi or uniform");
  auto* ale_rep = ale->add_option("--pfi-repeats", ale_args.pfi_repeats, "PFI repeats");
  auto* ale_seed = ale->add_option("--seed", ale_args.seed, "PFI shuffle seed");
  auto* ale_threads = ale->add_option("--threads", ale_args.threads,
                                      "worker threads for (task, feature) jobs");
  auto* ale_out = ale->add_option("--out", ale_args.out, "bundle output path");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "similarity matrix from a curve bundle");
  auto* sim_bundle = sim->add_option("--bundle", sim_args.bundle, "curve bundle path");
  auto* sim_imp = sim->add_option("--importance", sim_args.importance, "pfi, uniform or file");
  auto* sim_impf = sim->add_option("--importance-file", sim_args.importance_file,
                                   "feature,weight CSV for --importance file");
  auto* sim_match = sim->add_option("--matching", sim_args.matching, "by_name or best_match");
  auto* sim_gamma = sim->add_flag("--gamma", sim_args.gamma, "apply the performance factor");
  auto* sim_tau = sim->add_option("--tau", sim_args.tau, "'median' or a loss threshold");
  auto* sim_threads = sim->add_option("--threads", sim_args.threads,
                                      "worker threads for pairwise cells");
  auto* sim_out = sim->add_option("--out-dir", sim_args.out_dir, "output directory");

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand("cluster", "Ward clustering of a similarity matrix");
  auto* cl_matrix = cluster->add_option("--matrix", cluster_args.matrix, "matrix CSV path");
  auto* cl_k = cluster->add_option("-k,--clusters", cluster_args.k, "flat cut size");
  auto* cl_out = cluster->add_option("--out-dir", cluster_args.out_dir, "output directory");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "markdown summary of a similarity run");
  auto* rp_matrix = report->add_option("--matrix", report_args.matrix, "matrix CSV path");
  auto* rp_pairs = report->add_option("--pairs", report_args.pairs,
                                      "pairs CSV (default: next to the matrix)");
  auto* rp_meta = report->add_option("--meta", report_args.meta,
                                     "matrix metadata JSON (default: next to the matrix)");
  auto* rp_out = report->add_option("--out", report_args.out, "report output path");
  auto* rp_top = report->add_option("--top", report_args.top, "features listed per pair");

  try {
    app.parse(argc, argv);

    ConfigSource cfg;
    if (config_path.empty()) {
      if (auto env = std::getenv("MTSIM_CONFIG"); env != nullptr && *env != '\0') {
        config_path = env;
      }
    }
    if (!config_path.empty()) cfg.load_file(config_path);

    if (gen->parsed()) {
      apply_setting(gen_out, cfg, "out", gen_args.out);
      apply_setting(gen_seed, cfg, "seed", gen_args.seed);
      apply_setting(gen_n, cfg, "n", gen_args.n);
      apply_setting(gen_deg, cfg, "with-degraded", gen_args.with_degraded);
      return run_gen(gen_args);
    }
    if (ale->parsed()) {
      apply_setting(ale_model, cfg, "model", ale_args.model);
      apply_setting(ale_manifest, cfg, "manifest", ale_args.manifest_path);
      apply_setting(ale_knn_k, cfg, "knn-k", ale_args.knn_k);
      apply_setting(ale_raw_k, cfg, "raw-k", ale_args.raw_k);
      apply_setting(ale_grid_k, cfg, "grid-k", ale_args.grid_k);
      apply_setting(ale_smooth, cfg, "smooth", ale_args.smooth);
      apply_setting(ale_lambda, cfg, "smooth-lambda", ale_args.smooth_lambda);
      ale_args.smooth_lambda_given =
          ale_lambda->count() > 0 || cfg.get("smooth-lambda").has_value();
      apply_setting(ale_imp, cfg, "importance", ale_args.importance);
      apply_setting(ale_rep, cfg, "pfi-repeats", ale_args.pfi_repeats);
      apply_setting(ale_seed, cfg, "seed", ale_args.seed);
      apply_setting(ale_threads, cfg, "threads", ale_args.threads);
      apply_setting(ale_out, cfg, "out", ale_args.out);
      return run_ale(ale_args);
    }
    if (sim->parsed()) {
      apply_setting(sim_bundle, cfg, "bundle", sim_args.bundle);
      apply_setting(sim_imp, cfg, "importance", sim_args.importance);
      apply_setting(sim_impf, cfg, "importance-file", sim_args.importance_file);
      apply_setting(sim_match, cfg, "matching", sim_args.matching);
      apply_setting(sim_gamma, cfg, "gamma", sim_args.gamma);
      apply_setting(sim_tau, cfg, "tau", sim_args.tau);
      apply_setting(sim_threads, cfg, "threads", sim_args.threads);
      apply_setting(sim_out, cfg, "out-dir", sim_args.out_dir);
      return run_sim(sim_args);
    }
    if (cluster->parsed()) {
      apply_setting(cl_matrix, cfg, "matrix", cluster_args.matrix);
      apply_setting(cl_k, cfg, "k", cluster_args.k);
      apply_setting(cl_out, cfg, "out-dir", cluster_args.out_dir);
      return run_cluster(cluster_args);
    }
    if (report->parsed()) {
      apply_setting(rp_matrix, cfg, "matrix", report_args.matrix);
      apply_setting(rp_pairs, cfg, "pairs", report_args.pairs);
      apply_setting(rp_meta, cfg, "meta", report_args.meta);
      apply_setting(rp_out, cfg, "out", report_args.out);
      apply_setting(rp_top, cfg, "top", report_args.top);
      return run_report(report_args);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
