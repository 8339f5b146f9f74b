// mgen: chord-conditioned melody generation and structure analysis toolkit.
//
// Subcommands: ingest, train, generate, analyze, evaluate, gradcheck.
// Exit codes: 0 success, 1 check failure, 2 usage/input error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mgen/analysis.hpp"
#include "mgen/grad_check.hpp"
#include "mgen/lstm.hpp"
#include "mgen/model.hpp"
#include "mgen/score_text.hpp"
#include "mgen/smf.hpp"
#include "mgen/stats.hpp"
#include "mgen/svg.hpp"
#include "mgen/tcn.hpp"
#include "mgen/training.hpp"

namespace fs = std::filesystem;
using namespace mgen;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir;
  int jobs = 1;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&t));
  return buf;
}

fs::path make_run_dir(const GlobalOptions& g, const std::string& command) {
  fs::path dir = g.out_dir.empty()
                     ? fs::path("runs") / (timestamp() + "-" + command + "-s" +
                                           std::to_string(g.seed))
                     : fs::path(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  const std::string s = read_file(path);
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail("cannot write " + path.string());
  os << content;
}

void echo_config(const fs::path& dir, const std::string& command,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream os;
  os << "command " << command << "\n";
  for (const auto& [k, v] : kv) os << k << " " << v << "\n";
  write_file(dir / "config.txt", os.str());
}

bool looks_like_smf(const fs::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".mid" || ext == ".midi" || ext == ".smf";
}

SymbolicScore load_score(const fs::path& path, int melody_track,
                         int chord_track) {
  if (looks_like_smf(path)) {
    RawSmfEvents raw = parse_smf(read_bytes(path));
    return normalize_tempo(to_symbolic_score(raw, melody_track, chord_track));
  }
  return normalize_tempo(parse_score_text(read_file(path)));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
  std::vector<std::string> inputs;
  std::string format = "auto";
  int melody_track = 0;
  int chord_track = 1;
  bool augment = false;
};

int cmd_ingest(const GlobalOptions& g, const IngestOptions& o) {
  const fs::path dir = make_run_dir(g, "ingest");
  echo_config(dir, "ingest",
              {{"seed", std::to_string(g.seed)},
               {"format", o.format},
               {"melody_track", std::to_string(o.melody_track)},
               {"chord_track", std::to_string(o.chord_track)},
               {"augment", o.augment ? "1" : "0"}});

  std::ostringstream manifest;
  int ok = 0, failed = 0;
  std::size_t total_frames = 0, total_warnings = 0;
  for (const auto& input : o.inputs) {
    const fs::path path(input);
    try {
      SymbolicScore score;
      if (o.format == "smf" || (o.format == "auto" && looks_like_smf(path))) {
        score = normalize_tempo(to_symbolic_score(parse_smf(read_bytes(path)),
                                                  o.melody_track, o.chord_track));
      } else {
        score = normalize_tempo(parse_score_text(read_file(path)));
      }
      QuantizeResult q = quantize_score(score);
      const std::string stem = path.stem().string();
      std::vector<std::string> written;
      if (o.augment) {
        auto transposed = transpose_augment(q.frames);
        for (int s = 0; s < 12; ++s) {
          const std::string name = stem + ".t" + std::to_string(s) + ".frames.csv";
          write_file(dir / name, frames_to_csv(transposed[s]));
          written.push_back(name);
        }
      } else {
        const std::string name = stem + ".frames.csv";
        write_file(dir / name, frames_to_csv(q.frames));
        written.push_back(name);
      }
      total_frames += q.frames.length();
      total_warnings += q.warnings.size();
      ++ok;
      manifest << "ok " << input << " frames=" << q.frames.length()
               << " warnings=" << q.warnings.size();
      for (const auto& name : written) manifest << " " << name;
      manifest << "\n";
      for (const auto& w : q.warnings)
        manifest << "warning " << input << " " << w << "\n";
    } catch (const std::exception& e) {
      ++failed;
      manifest << "error " << input << " " << e.what() << "\n";
    }
  }
  write_file(dir / "manifest.txt", manifest.str());
  std::cout << "ingest: " << ok << " ok, " << failed << " failed, "
            << total_frames << " frames, " << total_warnings
            << " quantization warnings -> " << dir.string() << "\n";
  if (failed > 0)
    std::cout << "warning: " << failed
              << " input(s) failed; see manifest.txt\n";
  return o.inputs.empty() ? 2 : 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainCmdOptions {
  std::string model = "uni";
  std::string corpus;
  int epochs = 10;
  long steps = 0;
  double lr = 1e-3;
  double target_loss = 0.0;
  bool sgd = false;
  int hidden = 128;
  int layers = 7;
  int encoder_layers = 1;
  int kernel = 2;
  std::string dilations = "1,2,4,8,16,32,64,128,256";
  int residual_channels = 64;
  int skip_channels = 128;
  long train_count = -1;  // -1: 67% of corpus
  bool augment = false;
};

std::vector<FrameSequence> load_corpus(const std::string& corpus) {
  std::vector<fs::path> files;
  const fs::path path(corpus);
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.path().string().ends_with(".frames.csv"))
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    std::istringstream is(read_file(path));
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      fs::path p(line);
      if (p.is_relative()) p = path.parent_path() / p;
      files.push_back(p);
    }
  }
  if (files.empty()) fail("corpus '" + corpus + "' has no frame CSVs");
  std::vector<FrameSequence> songs;
  for (const auto& f : files) songs.push_back(frames_from_csv(read_file(f)));
  return songs;
}

int cmd_train(const GlobalOptions& g, const TrainCmdOptions& o) {
  const fs::path dir = make_run_dir(g, "train");
  std::vector<FrameSequence> songs = load_corpus(o.corpus);
  const std::size_t train_count =
      o.train_count >= 0 ? static_cast<std::size_t>(o.train_count)
                         : std::max<std::size_t>(1, songs.size() * 2 / 3);
  CorpusSplit split = split_corpus(songs, train_count, o.augment, g.seed);

  ModelOptions mo;
  mo.layers = o.layers;
  mo.hidden = o.hidden;
  mo.encoder_layers = o.encoder_layers;
  mo.tcn_kernel = o.kernel;
  mo.tcn_dilations = parse_int_list(o.dilations);
  mo.tcn_residual_channels = o.residual_channels;
  mo.tcn_skip_channels = o.skip_channels;
  auto model = make_model(o.model, mo, g.seed);

  echo_config(dir, "train",
              {{"seed", std::to_string(g.seed)},
               {"model", o.model},
               {"corpus", o.corpus},
               {"songs", std::to_string(songs.size())},
               {"train_count", std::to_string(train_count)},
               {"augment", o.augment ? "1" : "0"},
               {"epochs", std::to_string(o.epochs)},
               {"steps", std::to_string(o.steps)},
               {"lr", std::to_string(o.lr)},
               {"optimizer", o.sgd ? "sgd" : "adam"}});

  TrainOptions to;
  to.epochs = o.epochs;
  to.max_steps = o.steps;
  to.lr = o.lr;
  to.target_loss = o.target_loss;
  to.use_sgd = o.sgd;
  to.seed = g.seed;
  TrainResult result = train_model(*model, split, to);

  std::ostringstream curve;
  curve << "epoch,train_nats,heldout_nats\n";
  for (const auto& e : result.curve) {
    curve << e.epoch << "," << e.train_nats << ",";
    if (std::isfinite(e.heldout_nats)) curve << e.heldout_nats;
    curve << "\n";
  }
  write_file(dir / "loss_curve.csv", curve.str());
  save_model((dir / "checkpoint.ckpt").string(), *model);

  std::cout << "train: " << result.steps << " steps over "
            << result.curve.size() << " epochs";
  if (!result.curve.empty())
    std::cout << ", final train " << result.curve.back().train_nats
              << " nats/frame";
  if (std::isfinite(result.best_heldout) &&
      result.best_heldout < std::numeric_limits<double>::infinity())
    std::cout << ", best held-out " << result.best_heldout;
  std::cout << " -> " << dir.string() << "\n";
  if (result.diverged) {
    std::cout << "warning: training diverged; checkpoint holds the last good "
                 "parameters\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::string checkpoint;
  std::string prime;
  int prime_beats = 20;
  int generate_beats = 20;
  double temperature = 1.0;
  bool midi = false;
  int melody_track = 0;
  int chord_track = 1;
};

int cmd_generate(const GlobalOptions& g, const GenerateOptions& o) {
  const fs::path dir = make_run_dir(g, "generate");
  echo_config(dir, "generate",
              {{"seed", std::to_string(g.seed)},
               {"checkpoint", o.checkpoint},
               {"prime", o.prime},
               {"prime_beats", std::to_string(o.prime_beats)},
               {"generate_beats", std::to_string(o.generate_beats)},
               {"temperature", std::to_string(o.temperature)}});

  auto model = load_model(o.checkpoint);
  SymbolicScore score = load_score(o.prime, o.melody_track, o.chord_track);
  QuantizeResult q = quantize_score(score);

  const std::size_t prime_len = o.prime_beats * kFramesPerBeat;
  const std::size_t total_len = prime_len + o.generate_beats * kFramesPerBeat;
  if (q.frames.length() < prime_len)
    fail("prime score is shorter than prime_beats");
  if (q.frames.chords.size() < total_len)
    fail("prime score chords do not cover prime+generate beats");

  FrameSequence prime;
  prime.melody.assign(q.frames.melody.begin(),
                      q.frames.melody.begin() + prime_len);
  prime.chords.assign(q.frames.chords.begin(),
                      q.frames.chords.begin() + prime_len);
  // A prime sliced mid-note starts with holds; turn a leading hold into an
  // onset so the slice is a valid sequence (cannot happen at frame 0 of a
  // valid piece, but guards odd prime_beats values).
  if (!prime.melody.empty() && prime.melody[0] == kHoldLabel)
    prime.melody[0] = kRestLabel;

  GenerationTask task;
  task.prime_beats = o.prime_beats;
  task.generate_beats = o.generate_beats;
  task.temperature = o.temperature;
  task.seed = g.seed;

  FrameSequence continuation =
      generate_continuation(*model, prime, q.frames.chords, task);

  write_file(dir / "continuation.frames.csv", frames_to_csv(continuation));
  SymbolicScore out_score = decode_frames(continuation);
  write_file(dir / "continuation.score", render_score_text(out_score));
  if (o.midi) {
    auto bytes = write_smf(out_score);
    std::ofstream os(dir / "continuation.mid", std::ios::binary);
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  }
  std::cout << "generate: " << o.prime_beats << "+" << o.generate_beats
            << " beats with " << model->kind() << " -> " << dir.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::vector<std::string> inputs;
  std::string theta_grid;  // empty = auto
  int grid_points = 64;
  int min_len = 4;
  bool audio = false;
  int melody_track = 0;
  int chord_track = 1;
};

int cmd_analyze(const GlobalOptions& g, const AnalyzeOptions& o) {
  const fs::path dir = make_run_dir(g, "analyze");
  echo_config(dir, "analyze",
              {{"seed", std::to_string(g.seed)},
               {"theta_grid", o.theta_grid.empty() ? "auto" : o.theta_grid},
               {"grid_points", std::to_string(o.grid_points)},
               {"min_len", std::to_string(o.min_len)},
               {"path", o.audio ? "audio" : "symbolic"}});

  for (const auto& input : o.inputs) {
    const fs::path path(input);
    SymbolicScore score = load_score(path, o.melody_track, o.chord_track);
    AnalysisOptions ao;
    if (!o.theta_grid.empty()) ao.theta_grid = parse_double_list(o.theta_grid);
    ao.grid_points = o.grid_points;
    ao.min_len = o.min_len;
    ao.symbolic_path = !o.audio;
    AnalysisResult result = analyze_sample(score, ao);

    const std::string stem = path.stem().string();
    std::ostringstream ir;
    ir << "theta,ir_total,best\n";
    for (std::size_t i = 0; i < result.ir.thetas.size(); ++i)
      ir << result.ir.thetas[i] << "," << result.ir.ir_totals[i] << ","
         << (i == result.ir.best_index ? 1 : 0) << "\n";
    write_file(dir / (stem + ".ir.csv"), ir.str());

    std::ostringstream pat;
    pat << "motif,length,occurrence_end\n";
    for (std::size_t m = 0; m < result.patterns.motifs.size(); ++m)
      for (int end : result.patterns.motifs[m].occurrence_ends)
        pat << m << "," << result.patterns.motifs[m].length << "," << end
            << "\n";
    write_file(dir / (stem + ".patterns.csv"), pat.str());

    std::ostringstream chroma;
    chroma << "beat,c,cs,d,ds,e,f,fs,g,gs,a,as,b\n";
    for (std::size_t bIdx = 0; bIdx < result.beat_features.size(); ++bIdx) {
      chroma << bIdx;
      for (double v : result.beat_features[bIdx]) chroma << "," << v;
      chroma << "\n";
    }
    write_file(dir / (stem + ".chroma.csv"), chroma.str());

    write_file(dir / (stem + ".ir.svg"),
               svg_ir_curve(result.ir, stem + ": IR vs theta"));
    write_file(dir / (stem + ".patterns.svg"),
               svg_patterns(result.patterns, result.beat_features.size(),
                            stem + ": motif occurrences"));

    std::cout << "analyze: " << input << " best_theta=" << result.ir.best_theta
              << " motifs=" << result.patterns.motifs.size() << " covered="
              << result.patterns.covered_frames(result.beat_features.size())
              << "/" << result.beat_features.size() << " beats\n";
  }
  std::cout << "analyze: artifacts -> " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string ratings;
  bool welch = false;
};

int cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o) {
  const fs::path dir = make_run_dir(g, "evaluate");
  echo_config(dir, "evaluate",
              {{"seed", std::to_string(g.seed)},
               {"ratings", o.ratings},
               {"variant", o.welch ? "welch" : "pooled"}});

  RatingsTable table = ratings_from_csv(read_file(o.ratings));
  ModelComparisonReport report = evaluate_models(
      table, o.welch ? TTestVariant::Welch : TTestVariant::Pooled);
  write_file(dir / "report.csv", report_to_csv(report));
  write_file(dir / "report.svg", svg_model_report(report, "model ratings"));

  std::cout << "evaluate: ANOVA F=" << report.anova.statistic
            << " p=" << report.anova.p_value << "\n";
  for (const auto& [name, t] : report.pairwise)
    std::cout << "  t-test " << name << ": t=" << t.statistic
              << " p=" << t.p_value << "\n";
  std::cout << "evaluate: artifacts -> " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// gradcheck

FrameSequence random_frames(std::size_t T, Rng& rng) {
  FrameSequence f;
  for (std::size_t t = 0; t < T; ++t) {
    int m;
    if (t == 0 || f.melody[t - 1] == kRestLabel) {
      m = static_cast<int>(rng.below(kMelodyVocab - 1));  // no hold
    } else {
      m = static_cast<int>(rng.below(kMelodyVocab));
    }
    f.melody.push_back(m);
    f.chords.push_back(static_cast<int>(rng.below(kChordVocab)));
  }
  return f;
}

int cmd_gradcheck(const GlobalOptions& g, std::size_t max_coords) {
  Rng rng(g.seed + 17);
  bool all_ok = true;
  const double eps = 1e-5, tol = 1e-4;

  auto check = [&](const std::string& label, SequenceModel& model,
                   const FrameSequence& frames) {
    model.params().zero_grads();
    model.forward_loss(frames);
    model.backward();
    Rng coord_rng(g.seed + 99);
    GradCheckReport report = grad_check(
        [&] { return model.forward_loss(frames); }, model.params(), eps, tol,
        max_coords, coord_rng);
    std::cout << (report.passed ? "PASS " : "FAIL ") << label << "\n";
    if (!report.passed) {
      std::cout << report.summary();
      all_ok = false;
    }
  };

  for (int hidden : {3, 8}) {
    for (int layers : {2, 3}) {
      for (std::size_t T : {5, 17}) {
        FrameSequence frames = random_frames(T, rng);
        LstmConfig lc;
        lc.hidden = hidden;
        lc.layers = layers;
        std::ostringstream label;
        label << "H=" << hidden << " layers=" << layers << " T=" << T;
        UniLstmModel uni(lc, g.seed + 1);
        check("uni-lstm " + label.str(), uni, frames);
        BiLstmModel bi(lc, g.seed + 2);
        check("bi-lstm  " + label.str(), bi, frames);
      }
    }
  }
  for (std::size_t T : {20}) {
    FrameSequence frames = random_frames(T, rng);
    TcnConfig tc;
    tc.kernel = 2;
    tc.dilations = {1, 2};
    tc.residual_channels = 4;
    tc.skip_channels = 6;
    TcnModel tcn(tc, g.seed + 3);
    std::ostringstream label;
    label << "tcn blocks=2 C=4 S=6 T=" << T;
    check(label.str(), tcn, frames);
  }

  std::cout << (all_ok ? "gradcheck: all configurations passed\n"
                       : "gradcheck: FAILURES above\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chord-conditioned melody generation and structure analysis"};
  app.set_config("--config");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir,
                 "output directory (default runs/<stamp>-<cmd>-s<seed>)");
  app.add_option("--jobs", g.jobs, "worker cap for parallel stages")
      ->capture_default_str();

  IngestOptions io;
  auto* ingest = app.add_subcommand("ingest", "scores -> frame CSV corpus");
  ingest->add_option("inputs", io.inputs, "score files (.mid/.midi or text)")
      ->required();
  ingest->add_option("--format", io.format, "auto|smf|text")
      ->check(CLI::IsMember({"auto", "smf", "text"}))
      ->capture_default_str();
  ingest->add_option("--melody-track", io.melody_track, "SMF melody track")
      ->capture_default_str();
  ingest->add_option("--chord-track", io.chord_track, "SMF chord track")
      ->capture_default_str();
  ingest->add_flag("--augment", io.augment, "emit all 12 transpositions");

  TrainCmdOptions to;
  auto* train = app.add_subcommand("train", "teacher-forced model training");
  train->add_option("--model", to.model, "uni|bi|tcn")
      ->check(CLI::IsMember({"uni", "bi", "tcn"}))
      ->capture_default_str();
  train->add_option("--corpus", to.corpus, "manifest file or directory")
      ->required();
  train->add_option("--epochs", to.epochs)->capture_default_str();
  train->add_option("--steps", to.steps, "cap on optimizer steps (0 = none)")
      ->capture_default_str();
  train->add_option("--lr", to.lr)->capture_default_str();
  train->add_option("--target-loss", to.target_loss,
                    "early stop at this train loss (nats/frame)")
      ->capture_default_str();
  train->add_flag("--sgd", to.sgd, "plain SGD instead of Adam");
  train->add_option("--hidden", to.hidden)->capture_default_str();
  train->add_option("--layers", to.layers)->capture_default_str();
  train->add_option("--encoder-layers", to.encoder_layers)
      ->capture_default_str();
  train->add_option("--kernel", to.kernel)->capture_default_str();
  train->add_option("--dilations", to.dilations)->capture_default_str();
  train->add_option("--residual-channels", to.residual_channels)
      ->capture_default_str();
  train->add_option("--skip-channels", to.skip_channels)
      ->capture_default_str();
  train->add_option("--train-count", to.train_count,
                    "songs in the training split (-1 = 2/3)")
      ->capture_default_str();
  train->add_flag("--augment", to.augment,
                  "12-key augmentation of the training split");

  GenerateOptions go;
  auto* generate = app.add_subcommand("generate", "continuation sampling");
  generate->add_option("--checkpoint", go.checkpoint)->required();
  generate->add_option("--prime", go.prime, "score file with chords covering prime+generate")
      ->required();
  generate->add_option("--prime-beats", go.prime_beats)->capture_default_str();
  generate->add_option("--generate-beats", go.generate_beats)
      ->capture_default_str();
  generate->add_option("--temperature", go.temperature,
                       "0 = argmax decoding")
      ->capture_default_str();
  generate->add_flag("--midi", go.midi, "also write continuation.mid");
  generate->add_option("--melody-track", go.melody_track)->capture_default_str();
  generate->add_option("--chord-track", go.chord_track)->capture_default_str();

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "VMO structure analysis");
  analyze->add_option("inputs", ao.inputs, "score files")->required();
  analyze->add_option("--theta-grid", ao.theta_grid,
                      "comma list; omit for percentile auto-grid");
  analyze->add_option("--grid-points", ao.grid_points)->capture_default_str();
  analyze->add_option("--min-len", ao.min_len, "minimum motif beats")
      ->capture_default_str();
  analyze->add_flag("--audio", ao.audio,
                    "synthesize + STFT chroma instead of symbolic chroma");
  analyze->add_option("--melody-track", ao.melody_track)->capture_default_str();
  analyze->add_option("--chord-track", ao.chord_track)->capture_default_str();

  EvaluateOptions eo;
  auto* evaluate = app.add_subcommand("evaluate", "ANOVA + t-tests on ratings");
  evaluate->add_option("--ratings", eo.ratings,
                       "CSV of sample_id,model_name,rating")
      ->required();
  evaluate->add_flag("--welch", eo.welch, "Welch t-tests instead of pooled");

  std::size_t max_coords = 48;
  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient verification");
  gradcheck->add_option("--max-coords", max_coords,
                        "coordinates sampled per parameter")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(g, io);
    if (app.got_subcommand(train)) return cmd_train(g, to);
    if (app.got_subcommand(generate)) return cmd_generate(g, go);
    if (app.got_subcommand(analyze)) return cmd_analyze(g, ao);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(g, eo);
    if (app.got_subcommand(gradcheck)) return cmd_gradcheck(g, max_coords);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
