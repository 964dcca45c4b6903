#include "commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sigverify/dataset.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/experiment.hpp"
#include "sigverify/features.hpp"
#include "sigverify/model_io.hpp"
#include "sigverify/scoring.hpp"
#include "sigverify/signature_io.hpp"
#include "sigverify/synthetic.hpp"

namespace sigverify::cli {

namespace fs = std::filesystem;

namespace {

// Flag values before validation. Each command copies what it needs into the
// library config structs.
struct FeatureFlags {
  std::string variant = "lnps";
  int window = 9;
  int level = 2;
  bool single_level = false;

  FeatureConfig resolve() const {
    if (window < 3 || window % 2 == 0) throw InvalidArgument("--window must be an odd integer >= 3");
    FeatureConfig c{(window - 1) / 2, level, variant_from_string(variant), single_level};
    c.validate();
    return c;
  }
};

struct DtwFlags {
  std::optional<int> band;
  bool normalize_path = false;

  DtwConfig resolve() const {
    if (band && *band < 0) throw InvalidArgument("--band must be >= 0");
    return {band, normalize_path};
  }
};

struct DataFlags {
  std::string dir;
  std::string naming = "auto";

  Dataset load() const {
    const fs::path root(dir);
    if (naming == "auto") {
      if (fs::exists(root / "manifest.jsonl")) return load_manifest(root / "manifest.jsonl");
      return load_dataset(root, Naming::svc);
    }
    const auto n = naming_from_string(naming);
    return n == Naming::csv_manifest ? load_manifest(root / "manifest.jsonl") : load_dataset(root, n);
  }
};

struct ExperimentFlags {
  ExperimentFlags(std::size_t t, std::string p, int n) : templates(t), pool(std::move(p)), trials(n) {}

  std::size_t templates = 0;
  std::string pool;
  int trials = 0;
  std::uint64_t seed = 0;
  bool random_forgeries = false;
  std::string report;
  std::string scores;
};

struct TrainFlags {
  TrainConfig cfg;
  std::vector<std::string> aux;
  std::string aux_naming = "auto";

  std::vector<Dataset> load_aux() const {
    std::vector<Dataset> out;
    for (const auto& a : aux) out.push_back(DataFlags{a, aux_naming}.load());
    return out;
  }
};

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void add_feature_flags(CLI::App* cmd, FeatureFlags& f) {
  cmd->add_option("--variant", f.variant, "lnps | lnps_ri | delta_xy")->capture_default_str();
  cmd->add_option("--window", f.window, "window size W (odd)")->capture_default_str();
  cmd->add_option("--level", f.level, "signature truncation level")->capture_default_str();
  cmd->add_flag("--single-level", f.single_level, "keep only the top signature level (lnps)");
}

void add_dtw_flags(CLI::App* cmd, DtwFlags& d) {
  cmd->add_option("--band", d.band, "Sakoe-Chiba band radius");
  cmd->add_flag("--normalize-path", d.normalize_path, "divide DTW cost by warping path length");
}

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--data", d.dir, "dataset directory")->required();
  cmd->add_option("--naming", d.naming, "auto | svc | manifest")->capture_default_str();
}

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& e) {
  cmd->add_option("--templates", e.templates, "templates per client")->capture_default_str();
  cmd->add_option("--pool", e.pool, "template pool: first_10 | all")->capture_default_str();
  cmd->add_option("--trials", e.trials, "number of trials")->capture_default_str();
  cmd->add_option("--seed", e.seed, "experiment seed")->required();
  cmd->add_flag("--random-forgeries", e.random_forgeries, "also report random-forgery EER");
  cmd->add_option("--report", e.report, "write the JSON report here instead of stdout");
  cmd->add_option("--scores", e.scores, "write every verification score as CSV");
}

void add_train_flags(CLI::App* cmd, TrainFlags& t) {
  auto& c = t.cfg;
  cmd->add_option("--epochs", c.epochs)->capture_default_str();
  cmd->add_option("--hidden1", c.hidden1)->capture_default_str();
  cmd->add_option("--hidden2", c.hidden2)->capture_default_str();
  cmd->add_option("--embedding", c.embedding)->capture_default_str();
  cmd->add_option("--margin", c.margin)->capture_default_str();
  cmd->add_option("--lambda-center", c.lambda_center)->capture_default_str();
  cmd->add_option("--lambda-decay", c.lambda_decay)->capture_default_str();
  cmd->add_option("--lr", c.learning_rate)->capture_default_str();
  cmd->add_option("--clip", c.clip)->capture_default_str();
  cmd->add_option("--triplets", c.triplets_per_client_per_epoch, "triplets per client per epoch")
      ->capture_default_str();
  cmd->add_option("--random-negative-prob", c.random_negative_prob)->capture_default_str();
  cmd->add_option("--batch", c.batch_size)->capture_default_str();
  cmd->add_option("--aux", t.aux, "extra training dataset directory (repeatable)");
  cmd->add_option("--aux-naming", t.aux_naming, "auto | svc | manifest")->capture_default_str();
}

void emit_report(const ExperimentReport& report, const ExperimentFlags& e, std::ostream& out) {
  if (!e.scores.empty()) write_text_file(e.scores, scores_csv(report));
  if (e.report.empty()) {
    out << to_json(report) << '\n';
  } else {
    write_text_file(e.report, to_json(report) + "\n");
    out << to_text_table(report);
  }
}

RnnExperimentConfig rnn_config(const FeatureFlags& f, const TrainFlags& t, const ExperimentFlags& e,
                               unsigned threads) {
  RnnExperimentConfig c;
  c.features = f.resolve();
  c.train = t.cfg;
  c.train.threads = threads;
  c.n_templates = e.templates;
  c.pool = pool_from_string(e.pool);
  c.trials = e.trials;
  c.seed = e.seed;
  c.random_forgeries = e.random_forgeries;
  c.threads = threads;
  if (c.trials < 1) throw InvalidArgument("--trials must be >= 1");
  if (c.threads < 1) throw InvalidArgument("--threads must be >= 1");
  c.train.validate();
  return c;
}

std::vector<fs::path> signature_files(const fs::path& input) {
  if (!fs::exists(input)) throw IoError("no such file or directory: " + input.string());
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ext == ".txt" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidArgument("no .txt or .csv signature files in " + input.string());
  return files;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online signature verification with length-normalized path signatures"};
  app.set_config("--config", "", "key = value file with one [section] per command");
  app.require_subcommand(1);

  unsigned threads = default_threads();
  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker thread cap")->capture_default_str();
  };

  // synth
  SyntheticConfig synth;
  std::string synth_out;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic dataset (CSV files plus manifest.jsonl)");
  c_synth->add_option("--out", synth_out, "output directory")->required();
  c_synth->add_option("--clients", synth.n_clients)->capture_default_str();
  c_synth->add_option("--genuine", synth.genuine_per_client)->capture_default_str();
  c_synth->add_option("--forgeries", synth.forgeries_per_client)->capture_default_str();
  c_synth->add_option("--noise", synth.noise)->capture_default_str();
  c_synth->add_option("--max-rotation", synth.max_rotation_deg, "degrees")->capture_default_str();
  c_synth->add_option("--seed", synth.seed)->required();

  // extract
  FeatureFlags x_feat;
  std::string x_input, x_out;
  auto* c_extract = app.add_subcommand("extract", "featurize signature files into .lnps containers");
  c_extract->add_option("--input", x_input, "signature file or directory")->required();
  c_extract->add_option("--out", x_out, "output directory")->required();
  add_feature_flags(c_extract, x_feat);
  add_threads(c_extract);

  // eval-dtw
  FeatureFlags d_feat;
  d_feat.window = 11;
  DtwFlags d_dtw;
  DataFlags d_data;
  ExperimentFlags d_exp{5, "first_10", 10};
  auto* c_dtw = app.add_subcommand("eval-dtw", "repeated-trial DTW experiment");
  add_data_flags(c_dtw, d_data);
  add_feature_flags(c_dtw, d_feat);
  add_dtw_flags(c_dtw, d_dtw);
  add_experiment_flags(c_dtw, d_exp);
  add_threads(c_dtw);

  // train
  FeatureFlags t_feat;
  TrainFlags t_train;
  DataFlags t_data;
  ExperimentFlags t_exp{10, "all", 1};
  std::string t_model;
  auto* c_train = app.add_subcommand("train", "train a GRU model on the trial-0 split");
  add_data_flags(c_train, t_data);
  add_feature_flags(c_train, t_feat);
  add_train_flags(c_train, t_train);
  c_train->add_option("--templates", t_exp.templates, "templates per client")->capture_default_str();
  c_train->add_option("--pool", t_exp.pool, "template pool: first_10 | all")->capture_default_str();
  c_train->add_option("--seed", t_exp.seed, "experiment seed")->required();
  c_train->add_option("--out", t_model, "model output path")->required();
  add_threads(c_train);

  // eval-rnn
  FeatureFlags r_feat;
  TrainFlags r_train;
  DataFlags r_data;
  ExperimentFlags r_exp{10, "all", 5};
  std::string r_model;
  auto* c_rnn = app.add_subcommand("eval-rnn", "repeated-trial GRU experiment, or evaluate a trained model");
  add_data_flags(c_rnn, r_data);
  add_feature_flags(c_rnn, r_feat);
  add_train_flags(c_rnn, r_train);
  add_experiment_flags(c_rnn, r_exp);
  c_rnn->add_option("--model", r_model, "skip training and score with this model");
  add_threads(c_rnn);

  // verify
  FeatureFlags v_feat;
  DtwFlags v_dtw;
  std::string v_probe, v_model;
  std::vector<std::string> v_templates;
  double v_threshold = 0.0;
  auto* c_verify = app.add_subcommand("verify", "score one probe against templates and decide");
  c_verify->add_option("--probe", v_probe, "probe signature file")->required();
  c_verify->add_option("--templates", v_templates, "template signature files (two or more)")->required();
  c_verify->add_option("--model", v_model, "GRU model; DTW is used when absent");
  c_verify->add_option("--threshold", v_threshold, "accept iff score < threshold")->required();
  add_feature_flags(c_verify, v_feat);
  add_dtw_flags(c_verify, v_dtw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (threads < 1) throw InvalidArgument("--threads must be >= 1");

    if (c_synth->parsed()) {
      const auto d = generate_synthetic_dataset(synth);
      write_manifest_dataset(d, synth_out);
      out << "wrote " << d.signature_count() << " signatures for " << d.client_count() << " clients to "
          << synth_out << '\n';
    } else if (c_extract->parsed()) {
      const auto cfg = x_feat.resolve();
      const auto files = signature_files(x_input);
      fs::create_directories(x_out);
      for (const auto& f : files) {
        const auto seq = featurize(read_signature_file(f), cfg);
        const auto dest = fs::path(x_out) / (f.stem().string() + ".lnps");
        save_features(seq, dest);
        out << f.filename().string() << ": " << seq.rows() << " x " << seq.dim() << " -> " << dest.string() << '\n';
      }
    } else if (c_dtw->parsed()) {
      DtwExperimentConfig c;
      c.features = d_feat.resolve();
      c.dtw = d_dtw.resolve();
      c.n_templates = d_exp.templates;
      c.pool = pool_from_string(d_exp.pool);
      c.trials = d_exp.trials;
      c.seed = d_exp.seed;
      c.random_forgeries = d_exp.random_forgeries;
      c.threads = threads;
      if (c.trials < 1) throw InvalidArgument("--trials must be >= 1");
      emit_report(run_dtw_experiment(d_data.load(), c), d_exp, out);
    } else if (c_train->parsed()) {
      const auto c = rnn_config(t_feat, t_train, t_exp, threads);
      const auto result = train_rnn_trial(t_data.load(), t_train.load_aux(), c, 0);
      save_model(result.model, t_model);
      out << std::setprecision(6) << "trained " << result.model.parameter_count() << " parameters over "
          << result.epoch_loss.size() << " epochs; mean triplet loss " << result.epoch_loss.front() << " -> "
          << result.epoch_loss.back() << "\nmodel written to " << t_model << '\n';
    } else if (c_rnn->parsed()) {
      const auto c = rnn_config(r_feat, r_train, r_exp, threads);
      const auto dataset = r_data.load();
      if (r_model.empty()) {
        emit_report(run_rnn_experiment(dataset, r_train.load_aux(), c), r_exp, out);
      } else {
        const auto model = load_model(r_model, static_cast<int>(c.features.dimension()));
        emit_report(evaluate_rnn_model(dataset, model, c), r_exp, out);
      }
    } else if (c_verify->parsed()) {
      const auto cfg = v_feat.resolve();
      if (v_templates.size() < 2) throw InvalidArgument("verify needs at least two --templates");
      const auto probe = read_signature_file(v_probe);
      std::vector<OnlineSignature> templates;
      for (const auto& t : v_templates) templates.push_back(read_signature_file(t));
      std::optional<GruModel> model;
      if (!v_model.empty()) model = load_model(v_model, static_cast<int>(cfg.dimension()));
      const Backend backend = model ? Backend{RnnBackend{&*model}} : Backend{DtwBackend{v_dtw.resolve()}};
      const auto s = score_probe(probe, templates, backend, cfg);
      if (s.degenerate) err << "warning: templates are identical under this backend; using mean distance\n";
      out << (s.score < v_threshold ? "ACCEPT" : "REJECT") << " score=" << std::setprecision(10) << s.score
          << '\n';
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace sigverify::cli
