#include "dracula/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dracula/error.hpp"
#include "dracula/learn.hpp"
#include "dracula/pipeline.hpp"
#include "dracula/recon.hpp"

namespace dracula {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string mode = "char";
  std::size_t max_len = 8;
  std::size_t min_count = 2;
  double tau = 0.0;
  double lambda = 1.0;
  double alpha = 1.0;
  bool cuts = false;
  bool cfl = false;
  std::size_t bon = 0;
  bool exact = false;
  std::size_t exact_limit = 12;
  bool no_polish = false;
  bool dump_lp = false;
  double rho = 1.0;
  bool flat = false;
  bool fractional = false;
  bool normalize = false;
  std::string grid;
  std::uint64_t seed = 1;
  bool synthetic = false;
  std::size_t docs_per_class = 8;
  std::size_t resamples = 100;
  std::size_t test_per_class = 2;
  std::string matrix;
  std::string labels;
  std::size_t doc = 0;
  std::string out = "out";

  json to_json() const {
    return json{{"command", command},     {"input", input},
                {"mode", mode},           {"max_len", max_len},
                {"min_count", min_count}, {"tau", tau},
                {"lambda", lambda},       {"alpha", alpha},
                {"cuts", cuts},           {"cfl", cfl},
                {"bon", bon},             {"exact", exact},
                {"exact_limit", exact_limit}, {"polish", !no_polish},
                {"rho", rho},             {"flat", flat},
                {"fractional", fractional}, {"normalize", normalize},
                {"grid", grid},           {"seed", seed},
                {"synthetic", synthetic}, {"docs_per_class", docs_per_class},
                {"resamples", resamples}, {"test_per_class", test_per_class},
                {"matrix", matrix},       {"labels", labels},
                {"doc", doc},             {"out", out}};
  }

  std::vector<std::string> header(const std::string& artifact) const {
    return {"dracula " + std::string(kVersion) + " " + artifact, "config " + to_json().dump()};
  }
};

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg) { fs::create_directories(cfg.out); }

  std::ofstream open(const std::string& name) const {
    std::ofstream os(fs::path(cfg_.out) / name, std::ios::binary);
    if (!os) throw Error(ErrorKind::ParseError, "cannot write " + (fs::path(cfg_.out) / name).string());
    return os;
  }

  void text(const std::string& name, const std::string& body) const {
    auto os = open(name);
    for (const auto& line : cfg_.header(name)) os << "# " << line << '\n';
    os << body;
  }

 private:
  const RunConfig& cfg_;
};

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("input", cfg.input, "Corpus file (one document per line) or directory")->required();
  sub->add_option("--mode", cfg.mode, "char or token")->check(CLI::IsMember({"char", "token"}));
  sub->add_option("-K,--max-len", cfg.max_len, "Longest candidate n-gram");
  sub->add_option("-m,--min-count", cfg.min_count, "Minimum occurrences of a candidate");
  sub->add_option("--tau", cfg.tau, "Dictionary membership cost");
  sub->add_option("--lambda", cfg.lambda, "Dictionary pointer cost");
  sub->add_option("--alpha", cfg.alpha, "Character pointer discount");
  sub->add_flag("--cuts", cfg.cuts, "Add equivalence-class cuts");
  sub->add_flag("--cfl", cfg.cfl, "Shallow landmark: plaintext dictionary, character pointers only");
  sub->add_option("--bon", cfg.bon, "Bag-of-n-grams landmark with this length");
  sub->add_flag("--exact", cfg.exact, "Solve exactly when the instance is small");
  sub->add_option("--exact-limit", cfg.exact_limit, "Largest dictionary universe for --exact");
  sub->add_flag("--no-polish", cfg.no_polish, "Skip the local search after rounding");
  sub->add_option("-o,--out", cfg.out, "Output directory");
}

std::shared_ptr<const Corpus> load(const RunConfig& cfg) {
  return std::make_shared<const Corpus>(read_corpus(cfg.input, parse_mode(cfg.mode)));
}

CompressJob make_job(const RunConfig& cfg, std::shared_ptr<const Corpus> corpus) {
  CompressJob job;
  job.corpus = std::move(corpus);
  job.max_len = cfg.max_len;
  job.min_count = cfg.min_count;
  job.scheme = {cfg.tau, cfg.lambda, cfg.alpha};
  job.cuts = cfg.cuts;
  job.exact_if_small = cfg.exact;
  job.exact_limit = cfg.exact_limit;
  job.polish = !cfg.no_polish;
  if (cfg.bon > 0) {
    job.cost_kind = CostKind::BagOfNgrams;
    job.bon_len = cfg.bon;
  } else if (cfg.cfl) {
    job.cost_kind = CostKind::Plaintext;
    job.cfl = true;
  }
  return job;
}

json compression_json(const Compression& c, const RunConfig& cfg) {
  const ModelInstance& m = *c.model;
  const auto& table = m.corpus().table();
  const auto& cs = m.candidates();
  json doc;
  doc["header"] = {{"tool", "dracula"}, {"version", kVersion}, {"config", cfg.to_json()}};
  doc["objective"] = c.objective;
  json dict = json::array();
  for (CandidateId s : c.dictionary) dict.push_back({{"id", s}, {"text", table.render(cs.text(s))}});
  doc["dictionary"] = dict;
  json docs = json::array();
  for (PointerId id : c.doc_pointers) {
    const Pointer& p = m.pointer(id);
    docs.push_back({{"doc", p.target}, {"location", p.location}, {"source", p.source},
                    {"text", table.render(cs.text(p.source))}});
  }
  doc["document_pointers"] = docs;
  json dps = json::array();
  for (PointerId id : c.dict_pointers) {
    const Pointer& p = m.pointer(id);
    const std::string text = p.kind == PointerKind::DictChar ? table.symbol(p.source) : table.render(cs.text(p.source));
    dps.push_back({{"target", p.target}, {"location", p.location}, {"kind", pointer_kind_name(p.kind)},
                   {"source", p.source}, {"text", text}});
  }
  doc["dictionary_pointers"] = dps;
  return doc;
}

void write_compression(const Output& out, const RunConfig& cfg, const CompressResult& res) {
  out.open("compression.json") << compression_json(res.compression, cfg).dump(1) << '\n';
  out.text("report.txt", format_report(res.report));
}

int cmd_compress(const RunConfig& cfg, std::ostream& os) {
  const auto job = make_job(cfg, load(cfg));
  const auto res = compress(job);
  Output out(cfg);
  write_compression(out, cfg, res);
  if (cfg.dump_lp && res.report.route == Route::LpRound) {
    out.open("relaxation.lp") << to_lp_format(build_lp(res.compression.model, job.cuts).program);
  }
  os << format_report(res.report);
  return kExitOk;
}

int cmd_oracle(RunConfig cfg, std::ostream& os) {
  cfg.exact = true;
  auto job = make_job(cfg, load(cfg));
  job.exact_if_small = true;
  const auto model = build_model(job);
  if (model->negative_costs()) throw Error(ErrorKind::InvalidParam, "the oracle needs nonnegative costs");
  CompressResult res;
  res.compression = exact_solve(model, cfg.exact_limit);
  res.report.route = Route::Exact;
  res.report.num_candidates = model->candidates().size();
  res.report.num_pointers = model->num_pointers();
  res.report.rounded_objective = res.compression.objective;
  res.report.stats = stats(res.compression);
  res.report.doc_pointers = res.compression.doc_pointers.size();
  res.report.dict_pointers = res.compression.dict_pointers.size();
  Output out(cfg);
  write_compression(out, cfg, res);
  os << format_report(res.report);
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, std::ostream& os) {
  const auto res = compress(make_job(cfg, load(cfg)));
  const auto& st = res.report.stats;
  std::ostringstream body;
  body.precision(12);
  body << "pointer_count: " << st.pointer_count << '\n'
       << "mnl: " << st.mnl << '\n'
       << "dict_size: " << st.dict_size << '\n'
       << "depth: " << st.depth << '\n';
  Output(cfg).text("stats.txt", body.str());
  os << body.str();
  return kExitOk;
}

int cmd_features(const RunConfig& cfg, std::ostream& os) {
  if (cfg.normalize && !cfg.fractional) {
    throw Error(ErrorKind::InvalidParam, "--normalize needs --fractional (it divides by LP weights)");
  }
  const auto job = make_job(cfg, load(cfg));
  Output out(cfg);
  auto write = [&](const std::string& name, const SparseMatrix& m) {
    auto f = out.open(name);
    auto header = cfg.header(name);
    header.push_back(cfg.fractional ? "fractional true" : "fractional false");
    write_matrix(f, m, header);
  };

  if (cfg.fractional) {
    if (job.cost_kind == CostKind::BagOfNgrams) {
      throw Error(ErrorKind::InvalidParam, "the bag-of-n-grams landmark has no relaxation to read");
    }
    const auto model = build_model(job);
    const auto lp = build_lp(model, job.cuts);
    const auto sol = solve_simplex(lp);
    const auto ff = fractional_features(lp, sol);
    write("X.txt", ff.x);
    write("G.txt", ff.g);
    if (cfg.flat) write("Xhat.txt", diffuse(ff.x, ff.g, cfg.rho, cfg.normalize ? &ff.t : nullptr));
    auto names = out.open("names.txt");
    write_names(names, ff.space.names(model->corpus(), model->candidates()), cfg.header("names.txt"));
    os << "features: " << ff.space.size() << "\nrows: " << ff.x.rows() << "\nfractional: true\n";
    return kExitOk;
  }

  const auto res = compress(job);
  const Compression& c = res.compression;
  const auto space = feature_space(c);
  const auto x = top_features(c, space);
  const auto g = dict_matrix(c, space);
  write("X.txt", x);
  write("G.txt", g);
  if (cfg.flat) write("Xhat.txt", diffuse(x, g, cfg.rho));
  auto names = out.open("names.txt");
  write_names(names, space.names(c.model->corpus(), c.model->candidates()), cfg.header("names.txt"));
  auto dag = out.open("dag.txt");
  write_dag(dag, dag_export(c), c.model->corpus(), c.model->candidates(), cfg.header("dag.txt"));
  os << "features: " << space.size() << "\nrows: " << x.rows() << "\nfractional: false\n";
  return kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParam, "bad grid value '" + item + "'");
    }
  }
  return grid;
}

int cmd_path(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  auto job = make_job(cfg, load(cfg));
  if (job.cost_kind != CostKind::Scheme) throw Error(ErrorKind::InvalidParam, "path needs the parametric scheme");
  const auto grid = parse_grid(cfg.grid);
  const auto res = path_sweep(job, grid);

  std::ostringstream table, segs;
  table.precision(12);
  segs.precision(12);
  table << "lambda\tobjective\n";
  std::vector<double> y;
  for (const auto& p : res.points) {
    table << p.lambda << '\t' << p.lp_objective << '\n';
    y.push_back(p.lp_objective);
  }
  segs << "lo\thi\tpoints\trounded_objective\tmnl\tdict_size\tfingerprint\n";
  std::size_t i = 0;
  for (const auto& s : res.segments) {
    const auto& first = res.points[i];
    segs << s.lo << '\t' << s.hi << '\t' << s.lambdas.size() << '\t' << first.rounded_objective << '\t'
         << first.mnl << '\t' << first.dict_size << '\t' << std::hex << s.fingerprint << std::dec << '\n';
    i += s.lambdas.size();
  }
  Output out(cfg);
  out.text("objective.tsv", table.str());
  out.text("segments.tsv", segs.str());

  const double violation = concavity_violation(grid, y);
  const bool contiguous = segments_contiguous(res.points);
  os << "points: " << res.points.size() << "\nsegments: " << res.segments.size()
     << "\nconcavity_violation: " << violation << "\ncontiguous: " << (contiguous ? "true" : "false") << '\n';
  if (violation > 1e-6 || !contiguous) {
    err << "error: path self-check failed (objective not concave or a segment reappears)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

std::vector<Label> read_labels(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ParseError, "cannot open labels " + path);
  std::vector<Label> labels;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      labels.push_back(static_cast<Label>(std::stoul(line)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad label '" + line + "'");
    }
  }
  return labels;
}

int cmd_eval(const RunConfig& cfg, std::ostream& os) {
  std::ostringstream body;
  body.precision(12);
  auto emit = [&](const std::string& variant, const LabeledMatrix& data) {
    const auto e = resample_eval(data, cfg.seed, cfg.resamples, cfg.test_per_class);
    body << variant << ".nb_accuracy: " << e.nb_accuracy << '\n'
         << variant << ".centroid_accuracy: " << e.centroid_accuracy << '\n'
         << variant << ".majority_baseline: " << e.majority_baseline << '\n';
  };
  body << "seed: " << cfg.seed << "\nresamples: " << cfg.resamples << '\n';

  if (!cfg.matrix.empty()) {
    std::ifstream is(cfg.matrix);
    if (!is) throw Error(ErrorKind::ParseError, "cannot open matrix " + cfg.matrix);
    emit("matrix", {read_matrix(is), read_labels(cfg.labels)});
  } else if (cfg.synthetic) {
    SyntheticSpec spec;
    spec.docs_per_class = cfg.docs_per_class;
    spec.phrase_rate = 0.4;
    const auto syn = synthetic_corpus(cfg.seed, spec);
    auto corpus = std::make_shared<const Corpus>(ingest(syn.texts, Mode::Token));
    RunConfig plain = cfg;
    plain.bon = 0;
    plain.cfl = false;
    const auto c = compress(make_job(plain, corpus)).compression;
    const auto x = top_features(c);
    emit("top", {x, syn.labels});
    emit("flat", {diffuse(x, dict_matrix(c), cfg.rho), syn.labels});
    auto bon = make_job(plain, corpus);
    bon.cost_kind = CostKind::BagOfNgrams;
    bon.bon_len = cfg.bon > 0 ? cfg.bon : cfg.max_len;
    emit("bon", {top_features(compress(bon).compression), syn.labels});
  } else {
    throw Error(ErrorKind::InvalidParam, "eval needs --synthetic or --matrix with --labels");
  }
  Output(cfg).text("eval.txt", body.str());
  os << body.str();
  return kExitOk;
}

int cmd_recon(const RunConfig& cfg, std::ostream& os) {
  const auto model = build_model(make_job(cfg, load(cfg)));
  if (cfg.doc >= model->corpus().size()) throw Error(ErrorKind::InvalidParam, "no such document");
  ReconInstance inst;
  inst.target = model->corpus().doc(static_cast<DocId>(cfg.doc)).symbols;
  for (PointerId p : model->doc_pointers(static_cast<DocId>(cfg.doc))) {
    const Pointer& ptr = model->pointer(p);
    inst.intervals.push_back({ptr.location, ptr.length, model->pointer_cost(p), 1.0, p});
  }
  os << describe(inst, solve_dp(inst));
  return kExitOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParam: return kExitUsage;
    case ErrorKind::NumericalFailure: return kExitNumerical;
    default: return kExitData;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Deep dictionary compression of text corpora"};
  app.set_config("--config", "", "TOML file; options go under a [command] section");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* compress_cmd = app.add_subcommand("compress", "Compress a corpus and write the compression and report");
  add_model_options(compress_cmd, cfg);
  compress_cmd->add_flag("--dump-lp", cfg.dump_lp, "Also write the relaxation in LP format");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact search over every dictionary (small inputs)");
  add_model_options(oracle_cmd, cfg);

  auto* stats_cmd = app.add_subcommand("stats", "Pointer count, mean n-gram length, dictionary size, depth");
  add_model_options(stats_cmd, cfg);

  auto* features_cmd = app.add_subcommand("features", "Write X, G, names and the DAG (and X-hat with --flat)");
  add_model_options(features_cmd, cfg);
  features_cmd->add_flag("--flat", cfg.flat, "Write the diffused matrix X-hat");
  features_cmd->add_option("--rho", cfg.rho, "Diffusion weight");
  features_cmd->add_flag("--fractional", cfg.fractional, "Read features from the LP solution");
  features_cmd->add_flag("--normalize", cfg.normalize, "Divide dictionary rows by t (fractional only)");

  auto* path_cmd = app.add_subcommand("path", "Sweep lambda over a grid and tabulate the LP objective");
  add_model_options(path_cmd, cfg);
  path_cmd->add_option("--grid", cfg.grid, "Comma-separated ascending lambda values")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Resampled NB and centroid accuracy");
  eval_cmd->add_flag("--synthetic", cfg.synthetic, "Use the seeded synthetic 3-class corpus");
  eval_cmd->add_option("--docs-per-class", cfg.docs_per_class, "Synthetic documents per class");
  eval_cmd->add_option("--matrix", cfg.matrix, "Feature matrix file");
  eval_cmd->add_option("--labels", cfg.labels, "Labels file, one per matrix row");
  eval_cmd->add_option("--seed", cfg.seed, "Seed for the corpus and the resampling");
  eval_cmd->add_option("--resamples", cfg.resamples, "Random splits");
  eval_cmd->add_option("--test-per-class", cfg.test_per_class, "Held-out rows per class");
  eval_cmd->add_option("-K,--max-len", cfg.max_len, "Longest candidate n-gram");
  eval_cmd->add_option("-m,--min-count", cfg.min_count, "Minimum occurrences of a candidate");
  eval_cmd->add_option("--tau", cfg.tau, "Dictionary membership cost");
  eval_cmd->add_option("--lambda", cfg.lambda, "Dictionary pointer cost");
  eval_cmd->add_option("--alpha", cfg.alpha, "Character pointer discount");
  eval_cmd->add_option("--bon", cfg.bon, "Length for the bag-of-n-grams variant (default: max length)");
  eval_cmd->add_option("--rho", cfg.rho, "Diffusion weight for the flat variant");
  eval_cmd->add_option("-o,--out", cfg.out, "Output directory");
  cfg.min_count = 2;

  auto* recon_cmd = app.add_subcommand("recon", "Debug: dump one document's reconstruction module");
  add_model_options(recon_cmd, cfg);
  recon_cmd->add_option("--doc", cfg.doc, "Document index");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "compress") return cmd_compress(cfg, out);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out);
    if (cfg.command == "stats") return cmd_stats(cfg, out);
    if (cfg.command == "features") return cmd_features(cfg, out);
    if (cfg.command == "path") return cmd_path(cfg, out, err);
    if (cfg.command == "eval") return cmd_eval(cfg, out);
    if (cfg.command == "recon") return cmd_recon(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dracula
