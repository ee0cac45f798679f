/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "y2s/error.hpp"
#include "y2s/evaluate.hpp"
#include "y2s/gradcheck.hpp"
#include "y2s/trainer.hpp"

namespace y2s::commands {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const char* file) {
  return (fs::path(dir) / file).string();
}

void refuse_overwrite(const RunConfig& cfg, std::initializer_list<std::string> paths) {
  if (cfg.force) return;
  for (const std::string& p : paths) {
    if (fs::exists(p)) fail_io(p + " already exists; pass --force to overwrite");
  }
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) fail_io("cannot create directory " + parent.string() + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_io("cannot open " + path + " for writing");
  os << text;
  if (!os) fail_io("write failed for " + path);
}

std::string train_path(const RunConfig& cfg) { return join(cfg.data_dir, "train.jsonl"); }
std::string test_path(const RunConfig& cfg) { return join(cfg.data_dir, "test.jsonl"); }

DatasetSplit load_split(const std::string& path) {
  if (!fs::exists(path)) {
    fail_io("dataset file " + path + " not found; run gen-data or import first");
  }
  return import_features(path);
}

std::string count_line(const char* label, const DatasetSplit& s) {
  std::size_t caps = 0;
  for (const auto& r : s.shapes) caps += r.captions.size();
  return std::string(label) + ": " + std::to_string(s.shapes.size()) + " shapes, " +
         std::to_string(caps) + " captions, " + std::to_string(s.n_classes()) + " classes\n";
}

}  // namespace

void gen_data(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdGenData);
  const std::string train_file = train_path(cfg);
  const std::string test_file = test_path(cfg);
  const std::string manifest = join(cfg.data_dir, "manifest.txt");
  refuse_overwrite(cfg, {train_file, test_file, manifest});
  const Dataset ds = gen_dataset(cfg.per_class, cfg.captions, cfg.train.seed, cfg.synth);
  ensure_parent(train_file);
  export_jsonl(ds.train, train_file);
  export_jsonl(ds.test, test_file);
  write_text(manifest, manifest_text(cfg, "gen-data"));
  out(count_line("train", ds.train) + count_line("test", ds.test) + "wrote " + cfg.data_dir +
      "\n");
}

void import(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdImport);
  const DatasetSplit train = import_features(cfg.import_train);
  const DatasetSplit test = import_features(cfg.import_test);
  if (train.n_views != test.n_views || train.view_dim != test.view_dim) {
    fail_config("import: train split has " + std::to_string(train.n_views) + " views of dim " +
                std::to_string(train.view_dim) + " but test split has " +
                std::to_string(test.n_views) + " of dim " + std::to_string(test.view_dim));
  }
  const std::string train_file = train_path(cfg);
  const std::string test_file = test_path(cfg);
  const std::string manifest = join(cfg.data_dir, "manifest.txt");
  refuse_overwrite(cfg, {train_file, test_file, manifest});
  write_text(train_file, to_jsonl(train));
  write_text(test_file, to_jsonl(test));
  write_text(manifest, manifest_text(cfg, "import"));
  out(count_line("train", train) + count_line("test", test) + "wrote " + cfg.data_dir + "\n");
}

void train(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdTrain);
  refuse_overwrite(cfg, {cfg.checkpoint, cfg.log, cfg.checkpoint + ".manifest"});
  const DatasetSplit split = load_split(train_path(cfg));
  std::vector<std::string> captions;
  for (const auto& r : split.shapes) captions.insert(captions.end(), r.captions.begin(), r.captions.end());
  const Vocab vocab = Vocab::from_captions(captions);

  ModelConfig mc;
  mc.view_dim = split.view_dim;
  mc.n_views = split.n_views;
  mc.hidden_dim = cfg.hidden_dim;
  mc.word_embed_dim = cfg.word_embed_dim;
  mc.vocab_size = vocab.size();
  mc.n_classes = split.n_classes();
  validate(mc);

  TrainConfig tc = cfg.train;
  tc.weights = cfg.weights();
  ModelParams params =
      ModelParams::create(mc, needs_decoupled_decoders(tc.mode), cfg.train.seed);
  const TrainingSet data = TrainingSet::from_split(split, vocab);
  const std::set<int> classes(data.shape_classes.begin(), data.shape_classes.end());
  if (uses_c2(tc.constraints) && classes.size() < 2) {
    fail_config("train: constraints '" + std::string(to_string(tc.constraints)) +
                "' include the triplet term, which needs shapes from at least two classes, but " +
                train_path(cfg) + " has " + std::to_string(classes.size()) +
                "; generate more classes or use --constraints none or c1");
  }
  const TrainLog log = train(params, data, tc);

  ensure_parent(cfg.checkpoint);
  save_checkpoint(params, vocab.tokens(), cfg.checkpoint);
  ensure_parent(cfg.log);
  log.write_csv(cfg.log);
  write_text(cfg.checkpoint + ".manifest", manifest_text(cfg, "train"));
  std::string msg = "mode " + std::string(to_string(tc.mode)) + ", constraints " +
                    std::string(to_string(tc.constraints)) + ", " +
                    std::to_string(data.pairs.size()) + " pairs, vocab " +
                    std::to_string(vocab.size()) + "\n";
  if (!log.rows.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "epoch %d total objective %.6g\n", log.rows.back().epoch,
                  log.rows.back().total);
    msg += buf;
  }
  out(msg + "wrote " + cfg.checkpoint + " and " + cfg.log + "\n");
}

void eval(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdEval);
  const std::string csv = cfg.report + ".csv";
  const std::string txt = cfg.report + ".txt";
  refuse_overwrite(cfg, {csv, txt});
  Checkpoint ckpt = load_checkpoint(cfg.checkpoint);
  const Vocab vocab = Vocab::from_tokens(ckpt.vocab);
  const DatasetSplit test = load_split(test_path(cfg));
  const Evaluation ev = evaluate(ckpt.params, test, vocab, cfg.max_len);
  const std::pair<std::string, EvalReport> column{"model", ev.report};
  const std::string table = report_table(std::span(&column, 1));
  write_text(csv, report_csv(ev.report));
  write_text(txt, table);
  write_text(cfg.report + ".manifest", manifest_text(cfg, "eval"));
  out(table + "wrote " + csv + " and " + txt + "\n");
}

void caption(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdCaption);
  Checkpoint ckpt = load_checkpoint(cfg.checkpoint);
  const Vocab vocab = Vocab::from_tokens(ckpt.vocab);
  const DatasetSplit split =
      load_split(cfg.split == "train" ? train_path(cfg) : test_path(cfg));
  if (split.n_views != ckpt.params.config.n_views ||
      split.view_dim != ckpt.params.config.view_dim) {
    fail_config("caption: dataset view layout does not match the checkpoint");
  }
  std::vector<std::size_t> picks;
  if (cfg.shapes.empty()) {
    for (std::size_t i = 0; i < split.shapes.size(); ++i) picks.push_back(i);
  } else {
    std::string_view rest(cfg.shapes);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string tok(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      std::int64_t id = 0;
      try {
        std::size_t used = 0;
        id = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail("caption: '" + tok + "' is not a shape id");
      }
      bool found = false;
      for (std::size_t i = 0; i < split.shapes.size(); ++i) {
        if (split.shapes[i].id == id) {
          picks.push_back(i);
          found = true;
          break;
        }
      }
      if (!found) fail("caption: no shape with id " + tok + " in the " + cfg.split + " split");
    }
  }
  const int n = split.n_views;
  const int d = split.view_dim;
  std::string text;
  for (std::size_t i : picks) {
    const ShapeRecord& rec = split.shapes[i];
    std::vector<Tensor> views;
    for (int v = 0; v < n; ++v) {
      std::vector<Real> row(rec.views.begin() + static_cast<std::ptrdiff_t>(v) * d,
                            rec.views.begin() + static_cast<std::ptrdiff_t>(v + 1) * d);
      views.push_back(Tensor({d}, std::move(row)));
    }
    const std::vector<int> ids = y2s::caption(ckpt.params, views, cfg.max_len);
    text += "shape " + std::to_string(rec.id) + "\n  generated: " + vocab.decode(ids) + "\n";
    for (const std::string& c : rec.captions) text += "  truth:     " + c + "\n";
  }
  out(text);
}

void grad_check(const RunConfig& cfg, const Output& out) {
  validate(cfg, kCmdGradCheck);
  GradCheckOptions opts;
  opts.mode = cfg.train.mode;
  opts.constraints = cfg.train.constraints;
  opts.weights = cfg.weights();
  opts.seed = cfg.train.seed;
  opts.tolerance = cfg.tolerance;
  opts.strict_triplet = cfg.train.strict_triplet;
  struct FaultGuard {
    explicit FaultGuard(bool on) {
      if (on) testing::set_fault(testing::Fault::kFlipSigmoidBackward);
    }
    ~FaultGuard() { testing::set_fault(testing::Fault::kNone); }
  } guard(cfg.inject_fault);
  const GradCheckReport report =
      cfg.precision == "float" ? run_grad_check_f32(opts) : run_grad_check_f64(opts);
  out(report.to_text());
  if (!report.passed) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "gradient check failed: max relative error %.3e exceeds tolerance %.1e",
                  report.max_rel_error, report.tolerance);
    fail_numeric(buf);
  }
}

}  // namespace y2s::commands
