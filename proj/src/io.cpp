#include "mtsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mtsim {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError(context + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path.string() + "' for reading");
  return is;
}

json load_json(const std::filesystem::path& path) {
  auto is = open_in(path);
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
  }
  return doc;
}

}  // namespace

void write_dataset_csv(const TaskDataset& data, const std::filesystem::path& path) {
  auto os = open_out(path);
  for (std::size_t j = 0; j < data.d(); ++j) os << data.feature_names()[j] << ',';
  os << "target\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) os << format_double(data.samples()(i, j)) << ',';
    os << format_double(data.targets()[i]) << '\n';
  }
  if (!os) throw ValidationError("failed writing '" + path.string() + "'");
}

TaskDataset read_dataset_csv(const std::filesystem::path& path,
                             std::optional<std::string> task_id) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "target") {
    throw ValidationError("'" + path.string() +
                          "': header must list feature names, then 'target'");
  }
  std::vector<std::string> names(header.begin(), header.end() - 1);

  std::vector<double> values;
  std::vector<double> targets;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ValidationError("'" + path.string() + "' row " + std::to_string(row + 1) + ": " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
    }
    const std::string context = path.string() + " row " + std::to_string(row + 1);
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      values.push_back(parse_double(fields[j], context));
    }
    targets.push_back(parse_double(fields.back(), context));
    ++row;
  }
  Matrix samples(row, names.size());
  samples.data() = std::move(values);
  const std::string id = task_id ? *task_id : path.stem().string();
  return validate_dataset(id, std::move(names), std::move(samples), std::move(targets));
}

namespace {

json spec_to_json(const TaskSpec& spec) {
  return json{{"task_id", spec.task_id}, {"mixture_mu1", spec.mixture_mu1},
              {"mixture_mu2", spec.mixture_mu2}, {"a", spec.a}, {"b", spec.b},
              {"c", spec.c}, {"n", spec.n}, {"seed", spec.seed}};
}

TaskSpec spec_from_json(const json& j) {
  TaskSpec spec;
  spec.task_id = j.at("task_id").get<std::string>();
  spec.mixture_mu1 = j.at("mixture_mu1").get<double>();
  spec.mixture_mu2 = j.at("mixture_mu2").get<double>();
  spec.a = j.at("a").get<int>();
  spec.b = j.at("b").get<int>();
  spec.c = j.at("c").get<int>();
  spec.n = j.at("n").get<std::size_t>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  json doc{{"format", "mtsim-manifest"}, {"version", 1}, {"base_seed", manifest.base_seed},
           {"n", manifest.n}, {"degraded_task_ids", manifest.degraded_task_ids}};
  doc["specs"] = json::array();
  for (const auto& spec : manifest.specs) doc["specs"].push_back(spec_to_json(spec));
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
}

Manifest read_manifest(const std::filesystem::path& path) {
  const json doc = load_json(path);
  if (doc.value("format", "") != "mtsim-manifest") {
    throw ValidationError("'" + path.string() + "' is not an mtsim manifest");
  }
  Manifest m;
  m.base_seed = doc.at("base_seed").get<std::uint64_t>();
  m.n = doc.at("n").get<std::size_t>();
  m.degraded_task_ids = doc.value("degraded_task_ids", std::vector<std::string>{});
  for (const auto& j : doc.at("specs")) m.specs.push_back(spec_from_json(j));
  return m;
}

namespace {

json curve_to_json(const AleCurve& curve) {
  json j{{"feature", curve.feature()}, {"grid_kind", to_string(curve.grid_kind())},
         {"knots", curve.knots()}, {"values", curve.values()},
         {"proportions", curve.proportions()}};
  if (curve.grid_kind() == GridKind::raw) j["counts"] = curve.counts();
  return j;
}

AleCurve curve_from_json(const std::string& task_id, const json& j) {
  return AleCurve(task_id, j.at("feature").get<std::string>(),
                  j.at("knots").get<std::vector<double>>(),
                  j.at("values").get<std::vector<double>>(),
                  j.at("proportions").get<std::vector<double>>(),
                  grid_kind_from_string(j.at("grid_kind").get<std::string>()),
                  j.value("counts", std::vector<std::size_t>{}));
}

}  // namespace

void write_bundle(const Bundle& bundle, const std::filesystem::path& path) {
  json doc{{"format", "mtsim-curve-bundle"}, {"version", 1},
           {"importance_source", bundle.importance_source}, {"raw_k", bundle.raw_k},
           {"grid_k", bundle.grid_k}};
  if (bundle.smooth_lambda) doc["smooth_lambda"] = *bundle.smooth_lambda;
  doc["tasks"] = json::array();
  for (const auto& profile : bundle.profiles) {
    json task{{"task_id", profile.task_id()}, {"flagged", profile.flagged()}};
    if (profile.loss()) task["loss"] = *profile.loss();
    task["features"] = json::array();
    for (const auto& [name, curve] : profile.curves()) {
      json feature = curve_to_json(curve);
      feature["importance"] = profile.importance().at(name);
      task["features"].push_back(std::move(feature));
    }
    doc["tasks"].push_back(std::move(task));
  }
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
}

Bundle read_bundle(const std::filesystem::path& path) {
  const json doc = load_json(path);
  if (doc.value("format", "") != "mtsim-curve-bundle") {
    throw ValidationError("'" + path.string() + "' is not an mtsim curve bundle");
  }
  Bundle bundle;
  bundle.importance_source = doc.value("importance_source", "pfi");
  bundle.raw_k = doc.value("raw_k", std::size_t{0});
  bundle.grid_k = doc.value("grid_k", std::size_t{0});
  if (doc.contains("smooth_lambda")) bundle.smooth_lambda = doc["smooth_lambda"].get<double>();
  for (const auto& task : doc.at("tasks")) {
    const std::string task_id = task.at("task_id").get<std::string>();
    std::map<std::string, AleCurve> curves;
    std::map<std::string, double> importance;
    for (const auto& feature : task.at("features")) {
      AleCurve curve = curve_from_json(task_id, feature);
      importance[curve.feature()] = feature.at("importance").get<double>();
      curves.emplace(curve.feature(), std::move(curve));
    }
    std::optional<double> loss;
    if (task.contains("loss")) loss = task["loss"].get<double>();
    bundle.profiles.emplace_back(task_id, std::move(curves), std::move(importance), loss,
                                 task.value("flagged", false));
  }
  return bundle;
}

void write_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "task";
  for (const auto& id : matrix.task_ids()) os << ',' << id;
  os << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    os << matrix.task_ids()[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) os << ',' << format_double(matrix.value(i, j));
    os << '\n';
  }
}

SimilarityMatrix read_matrix_csv(const std::filesystem::path& path, bool scaled,
                                 Matching matching) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.front() != "task") {
    throw ValidationError("'" + path.string() + "': expected header 'task,<ids...>'");
  }
  const std::vector<std::string> ids(header.begin() + 1, header.end());
  Matrix values(ids.size(), ids.size());
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= ids.size()) {
      throw ValidationError("'" + path.string() + "': more rows than task ids");
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != ids.size() + 1 || fields.front() != ids[row]) {
      throw ValidationError("'" + path.string() + "' row " + std::to_string(row + 1) +
                            ": expected '" + ids[row] + "' and " + std::to_string(ids.size()) +
                            " values");
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      values(row, j) = parse_double(fields[j + 1], path.string());
    }
    ++row;
  }
  if (row != ids.size()) {
    throw ValidationError("'" + path.string() + "': matrix is not square (" +
                          std::to_string(row) + " rows for " + std::to_string(ids.size()) +
                          " columns)");
  }
  return SimilarityMatrix(ids, std::move(values), scaled, matching);
}

void write_matrix_meta(const MatrixMeta& meta, const std::filesystem::path& path) {
  json doc{{"format", "mtsim-matrix-meta"}, {"version", 1},
           {"convention", "rows are the reference task t; entry (t, t') is delta_t(t')"},
           {"matching", meta.matching}, {"scaled", meta.scaled}};
  if (!meta.tau.empty()) doc["tau"] = meta.tau;
  if (!meta.losses.empty()) doc["losses"] = meta.losses;
  if (!meta.flags.empty()) doc["flagged"] = meta.flags;
  auto os = open_out(path);
  os << doc.dump(2) << '\n';
}

MatrixMeta read_matrix_meta(const std::filesystem::path& path) {
  const json doc = load_json(path);
  MatrixMeta meta;
  meta.matching = doc.value("matching", "by_name");
  meta.scaled = doc.value("scaled", false);
  meta.tau = doc.value("tau", "");
  if (doc.contains("losses")) meta.losses = doc["losses"].get<std::map<std::string, double>>();
  if (doc.contains("flagged")) meta.flags = doc["flagged"].get<std::map<std::string, bool>>();
  return meta;
}

void write_pairs_csv(const std::vector<PairRow>& rows, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "ref_task,other_task,feature,matched,distance,importance,contribution\n";
  for (const auto& r : rows) {
    os << r.ref_task << ',' << r.other_task << ',' << r.feature << ',' << r.matched << ','
       << format_double(r.distance) << ',' << format_double(r.importance) << ','
       << format_double(r.weighted) << '\n';
  }
}

std::vector<PairRow> read_pairs_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("'" + path.string() + "' is empty");
  std::vector<PairRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) {
      throw ValidationError("'" + path.string() + "' line " + std::to_string(lineno) +
                            ": expected 7 fields");
    }
    const std::string context = path.string() + " line " + std::to_string(lineno);
    rows.push_back({f[0], f[1], f[2], f[3], parse_double(f[4], context),
                    parse_double(f[5], context), parse_double(f[6], context)});
  }
  return rows;
}

void write_labels_csv(const std::map<std::string, std::size_t>& labels,
                      const std::vector<std::string>& task_order,
                      const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "task,cluster\n";
  for (const auto& id : task_order) {
    auto it = labels.find(id);
    if (it == labels.end()) throw ValidationError("write_labels_csv: no label for '" + id + "'");
    os << id << ',' << it->second << '\n';
  }
}

void write_merges_csv(const Dendrogram& dendro, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "step,a,b,height,size\n";
  for (std::size_t m = 0; m < dendro.merges().size(); ++m) {
    const Merge& mg = dendro.merges()[m];
    os << m << ',' << mg.a << ',' << mg.b << ',' << format_double(mg.height) << ',' << mg.size
       << '\n';
  }
}

void write_dendro_coords_csv(const Dendrogram& dendro, const std::filesystem::path& path) {
  const std::vector<std::size_t> order = leaf_order(dendro);
  const std::size_t t = dendro.leaf_count();
  std::vector<double> x(t + dendro.merges().size(), 0.0);
  std::vector<double> y(t + dendro.merges().size(), 0.0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    x[order[pos]] = static_cast<double>(pos);
  }
  auto os = open_out(path);
  os << "step,x_left,y_left,x_right,y_right,height\n";
  for (std::size_t m = 0; m < dendro.merges().size(); ++m) {
    const Merge& mg = dendro.merges()[m];
    const std::size_t id = t + m;
    x[id] = 0.5 * (x[mg.a] + x[mg.b]);
    y[id] = mg.height;
    os << m << ',' << format_double(x[mg.a]) << ',' << format_double(y[mg.a]) << ','
       << format_double(x[mg.b]) << ',' << format_double(y[mg.b]) << ','
       << format_double(mg.height) << '\n';
  }
}

}  // namespace mtsim
