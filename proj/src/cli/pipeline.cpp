#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "quakeloc/cli.hpp"
#include "quakeloc/dataset.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/evaluate.hpp"
#include "quakeloc/fingerprint.hpp"
#include "quakeloc/gazetteer.hpp"
#include "quakeloc/kernels.hpp"
#include "quakeloc/preprocess.hpp"
#include "quakeloc/severity.hpp"
#include "quakeloc/tagger.hpp"
#include "quakeloc/text.hpp"
#include "quakeloc/verifier.hpp"

namespace quakeloc::cli {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::pair<std::string, std::string>> kStages = {
    {"ingest-gazetteer", "load the target gazetteer and list its names"},
    {"preprocess", "select, filter and clean the tweet corpora"},
    {"build-dataset", "write the training set (template or realistic)"},
    {"train", "fit the tagger and record the loss curve"},
    {"tag", "tag the cleaned tweets with the model or the gazetteer"},
    {"evaluate", "score model tags against gazetteer tags"},
    {"map", "geocode GPE mentions into a severity GeoJSON"},
    {"timeline", "count tweets per day"},
    {"compare", "compare the severity map with catalog epicenters"},
    {"all", "run every stage in order"}};

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

class Manifest {
 public:
  Manifest(std::string stage, const PipelineConfig& cfg)
      : stage_(std::move(stage)), cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }
  template <typename T>
  void count(const std::string& key, T value) {
    counts_[key] = value;
  }

  void write() const {
    auto files = [](const std::vector<fs::path>& paths) {
      ojson arr = ojson::array();
      for (const auto& p : paths) arr.push_back({{"path", p.string()}, {"sha256", file_sha256(p)}});
      return arr;
    };
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start_;
    ojson doc = {{"stage", stage_},
                 {"seed", cfg_.seed},
                 {"inputs", files(inputs_)},
                 {"outputs", files(outputs_)},
                 {"counts", counts_},
                 {"wall_time_s", wall.count()}};
    write_text(cfg_.out_dir / "manifests" / (stage_ + ".json"), doc.dump(2) + "\n");
    spdlog::info("{}: done in {:.2f}s", stage_, wall.count());
  }

 private:
  std::string stage_;
  const PipelineConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
  ojson counts_ = ojson::object();
};

const fs::path& require(const std::optional<fs::path>& p, std::string_view key, std::string_view stage) {
  if (!p) throw ConfigError(std::string(key) + ": required by " + std::string(stage));
  return *p;
}

const fs::path& upstream(const fs::path& p, std::string_view producer) {
  if (!fs::exists(p)) {
    throw Error("missing " + p.string() + "; run `" + std::string(producer) + "` first");
  }
  return p;
}

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.verifier) {
      const char* key = std::getenv(kOpenCageKeyEnv);
      if (!key || !*key) throw ConfigError(std::string("verifier: ") + kOpenCageKeyEnv + " is not set");
      verifier_ = std::make_unique<OpenCageVerifier>(key);
    }
  }

  fs::path out(std::string_view name) const { return cfg_.out_dir / name; }
  fs::path train_path() const { return cfg_.train_data.value_or(out("train.jsonl")); }
  fs::path model_path() const { return cfg_.model.value_or(out("model.json")); }
  fs::path gold_path() const { return cfg_.gold.value_or(out("tagged_gazetteer.jsonl")); }
  fs::path pred_path() const { return cfg_.pred.value_or(out("tagged_model.jsonl")); }

  void ingest_gazetteer() {
    Manifest m("ingest-gazetteer", cfg_);
    GeoNamesLoadStats stats;
    const auto& j = target_gazetteer(m, &stats);
    auto names = target_names(j);
    std::string text;
    for (const auto& n : names) text += n + "\n";
    auto path = out("gazetteer_names.txt");
    write_text(path, text);
    m.output(path);
    m.count("lines", stats.lines);
    m.count("accepted", stats.accepted);
    m.count("filtered_out", stats.filtered_out);
    m.count("malformed", stats.malformed);
    m.count("names", names.size());
    spdlog::info("ingest-gazetteer: {} records, {} names, {} malformed rows skipped", j.size(),
                 names.size(), stats.malformed);
    m.write();
  }

  void preprocess() {
    Manifest m("preprocess", cfg_);
    const auto& tweets = require(cfg_.tweets, "tweets", "preprocess");
    m.input(tweets);
    std::size_t skipped = 0;
    auto raw = read_tweet_csv(tweets, &skipped);
    auto selected = cfg_.corpus_keywords.empty() ? raw : filter_keywords(raw, cfg_.corpus_keywords);
    auto clean = preprocess_corpus(selected);
    auto path = out("clean_tweets.csv");
    write_clean_csv(clean, path);
    m.output(path);
    m.count("tweets_in", raw.size());
    m.count("rows_skipped", skipped);
    m.count("keyword_selected", selected.size());
    m.count("tweets_out", clean.size());
    spdlog::info("preprocess: {} tweets in, {} rows skipped, {} selected, {} out", raw.size(), skipped,
                 selected.size(), clean.size());

    if (cfg_.source_tweets) {
      m.input(*cfg_.source_tweets);
      std::size_t src_skipped = 0;
      auto src = read_tweet_csv(*cfg_.source_tweets, &src_skipped);
      auto src_clean = preprocess_corpus(src);
      auto src_path = out("clean_source.csv");
      write_clean_csv(src_clean, src_path);
      m.output(src_path);
      m.count("source_in", src.size());
      m.count("source_rows_skipped", src_skipped);
      m.count("source_out", src_clean.size());
      spdlog::info("preprocess: source corpus {} in, {} out", src.size(), src_clean.size());
    }
    m.write();
  }

  void build_dataset() {
    Manifest m("build-dataset", cfg_);
    const auto& j = target_gazetteer(m, nullptr);
    auto names = target_names(j);
    std::vector<AnnotatedExample> data;
    if (cfg_.style == DatasetStyle::kTemplate) {
      std::vector<std::string> templates{std::string(kDefaultTemplate)};
      if (cfg_.templates) {
        m.input(*cfg_.templates);
        templates = load_templates(*cfg_.templates);
      }
      data = build_template_dataset(names, templates);
      m.count("style", "template");
      m.count("templates", templates.size());
    } else {
      const auto& src_raw = require(cfg_.source_tweets, "source_tweets", "build-dataset --style realistic");
      const auto& src_gaz =
          require(cfg_.source_gazetteer, "source_gazetteer", "build-dataset --style realistic");
      auto clean_path = upstream(out("clean_source.csv"), "preprocess");
      m.input(src_raw);
      m.input(src_gaz);
      m.input(clean_path);
      auto source_gaz = load_geonames(src_gaz);
      auto hashtags = extract_hashtags(read_tweet_csv(src_raw));
      auto hv = filter_location_hashtags(hashtags, source_gaz, verifier_.get());
      auto clean = read_clean_csv(clean_path);
      auto substituted = substitute_locations(clean, hv, names, cfg_.seed);
      data = tag_disaster(tag_gpe(substituted, names), keyword_table(m));
      m.count("style", "realistic");
      m.count("hashtags", hv.all.size());
      m.count("valid_location_hashtags", hv.valid_locations.size());
      spdlog::info("build-dataset: {} hashtags, {} valid locations", hv.all.size(),
                   hv.valid_locations.size());
    }
    std::size_t gpe = 0, disaster = 0;
    for (const auto& ex : data) {
      for (const auto& s : ex.spans) (s.label == EntityLabel::kGpe ? gpe : disaster)++;
    }
    auto path = train_path();
    write_jsonl(data, path);
    m.output(path);
    m.count("examples", data.size());
    m.count("gpe_spans", gpe);
    m.count("disaster_spans", disaster);
    spdlog::info("build-dataset: {} examples, {} GPE spans, {} DISASTER spans", data.size(), gpe, disaster);
    m.write();
  }

  void train_model() {
    Manifest m("train", cfg_);
    auto data_path = upstream(train_path(), "build-dataset");
    m.input(data_path);
    auto data = read_jsonl(data_path);
    auto model = train(data, cfg_.hyperparams);
    auto path = model_path();
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    model.save(path);
    std::string loss = "epoch,loss\n";
    const auto& losses = model.meta().epoch_loss;
    for (std::size_t e = 0; e < losses.size(); ++e) loss += fmt::format("{},{}\n", e + 1, losses[e]);
    auto loss_path = out("loss.csv");
    write_text(loss_path, loss);
    m.output(path);
    m.output(loss_path);
    m.count("examples", model.meta().examples);
    m.count("tokens", model.meta().tokens);
    m.count("features", model.feature_names().size());
    m.count("final_loss", losses.empty() ? 0.0 : losses.back());
    m.write();
  }

  void tag(TagMode mode) {
    Manifest m(mode == TagMode::kModel ? "tag-model" : "tag-gazetteer", cfg_);
    auto clean_path = upstream(out("clean_tweets.csv"), "preprocess");
    m.input(clean_path);
    auto clean = read_clean_csv(clean_path);
    std::vector<AnnotatedExample> tagged;
    fs::path path;
    if (mode == TagMode::kGazetteer) {
      const auto& l = location_gazetteer(m);
      tagged = tag_disaster(tag_gpe(clean, l.name_list()), keyword_table(m));
      path = gold_path();
    } else {
      auto mp = upstream(model_path(), "train");
      m.input(mp);
      auto model = TaggerModel::load(mp);
      std::vector<std::string> texts;
      texts.reserve(clean.size());
      for (const auto& t : clean) texts.push_back(t.content);
      tagged = kernels::predict_texts(model, texts);
      path = pred_path();
    }
    std::size_t with_gpe = 0;
    for (const auto& ex : tagged) {
      with_gpe += std::any_of(ex.spans.begin(), ex.spans.end(),
                              [](const EntitySpan& s) { return s.label == EntityLabel::kGpe; });
    }
    write_jsonl(tagged, path);
    m.output(path);
    m.count("tweets", tagged.size());
    m.count("tweets_with_location", with_gpe);
    spdlog::info("tag: {} tweets, {} with a location", tagged.size(), with_gpe);
    m.write();
  }

  void evaluate() {
    Manifest m("evaluate", cfg_);
    auto gp = upstream(gold_path(), "tag --mode gazetteer");
    auto pp = upstream(pred_path(), "tag --mode model");
    m.input(gp);
    m.input(pp);
    auto gold = read_jsonl(gp);
    auto pred = read_jsonl(pp);
    auto cm = confusion(gold, pred);
    auto rep = class_report(cm);
    double gpe = entity_accuracy(gold, pred, EntityLabel::kGpe);
    double disaster = entity_accuracy(gold, pred, EntityLabel::kDisaster);

    ojson matrix = ojson::object();
    for (auto g : kAllClasses) {
      ojson row = ojson::object();
      for (auto p : kAllClasses) row[std::string(class_name(p))] = cm.at(g, p);
      matrix[std::string(class_name(g))] = row;
    }
    ojson doc = {{"seed", cfg_.seed},
                 {"gold_sha256", file_sha256(gp)},
                 {"pred_sha256", file_sha256(pp)},
                 {"examples", gold.size()},
                 {"tokens", cm.total()},
                 {"token_report", ojson::parse(rep.to_json())},
                 {"confusion", matrix},
                 {"entity_accuracy", {{"GPE", gpe}, {"DISASTER", disaster}}}};
    auto json_path = out("report.json");
    write_text(json_path, doc.dump(2) + "\n");
    auto text = rep.to_text() + fmt::format("\nentity accuracy: GPE {:.4f}  DISASTER {:.4f}\n", gpe, disaster);
    auto text_path = out("report.txt");
    write_text(text_path, text);
    m.output(json_path);
    m.output(text_path);
    m.count("examples", gold.size());
    m.count("tokens", cm.total());
    spdlog::info("evaluate: token accuracy {:.4f}, GPE entity accuracy {:.4f}", rep.accuracy, gpe);
    m.write();
  }

  void map(TagMode mode) {
    Manifest m("map", cfg_);
    auto tagged_path = mode == TagMode::kModel ? upstream(pred_path(), "tag --mode model")
                                               : upstream(gold_path(), "tag --mode gazetteer");
    m.input(tagged_path);
    const auto& l = location_gazetteer(m);
    auto result = geocode_entities(read_jsonl(tagged_path), l);
    std::map<std::string, std::string> meta = {
        {"seed", std::to_string(cfg_.seed)},
        {"tagged_sha256", file_sha256(tagged_path)},
        {"gazetteer_sha256", file_sha256(require(cfg_.gazetteer, "gazetteer", "map"))},
        {"resolved_mentions", std::to_string(result.resolved_mentions)},
        {"unresolved_mentions", std::to_string(result.unresolved_mentions)}};
    auto path = out("severity.geojson");
    emit_geojson(result.points, path, meta);
    m.output(path);
    m.count("points", result.points.size());
    m.count("resolved_mentions", result.resolved_mentions);
    m.count("unresolved_mentions", result.unresolved_mentions);
    spdlog::info("map: {} points from {} resolved mentions ({} unresolved)", result.points.size(),
                 result.resolved_mentions, result.unresolved_mentions);
    m.write();
  }

  void timeline_stage() {
    Manifest m("timeline", cfg_);
    auto clean_path = upstream(out("clean_tweets.csv"), "preprocess");
    m.input(clean_path);
    auto counts = timeline(read_clean_csv(clean_path));
    auto path = out("timeline.csv");
    write_text(path, timeline_csv(counts));
    m.output(path);
    m.count("days", counts.size());
    m.write();
  }

  void compare() {
    Manifest m("compare", cfg_);
    auto geo = upstream(out("severity.geojson"), "map");
    const auto& cat = require(cfg_.catalog, "catalog", "compare");
    m.input(geo);
    m.input(cat);
    CatalogLoadStats stats;
    auto events = load_usgs_catalog(cat, &stats);
    auto points = read_geojson(geo);
    auto cmp = compare_maps(points, events);

    ojson per_point = ojson::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      per_point.push_back({{"name", points[i].name},
                           {"geoname_id", points[i].geoname_id},
                           {"count", points[i].count},
                           {"severity", points[i].severity},
                           {"nearest_epicenter_km", cmp.nearest_km[i]}});
    }
    ojson doc = {{"seed", cfg_.seed},
                 {"severity_sha256", file_sha256(geo)},
                 {"catalog_sha256", file_sha256(cat)},
                 {"epicenters", events.size()},
                 {"weighted_mean_km", cmp.weighted_mean_km},
                 {"rank_correlation", cmp.rank_correlation},
                 {"points", per_point}};
    auto path = out("compare.json");
    write_text(path, doc.dump(2) + "\n");

    const auto& l = location_gazetteer(m);
    auto freq = historical_country_frequencies(events, cfg_.min_magnitude, gazetteer_country_resolver(l));
    std::vector<std::pair<std::string, std::uint64_t>> rows(freq.begin(), freq.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string csv = "country,count\n";
    for (const auto& [country, n] : rows) csv += country + "," + std::to_string(n) + "\n";
    auto freq_path = out("country_frequencies.csv");
    write_text(freq_path, csv);

    m.output(path);
    m.output(freq_path);
    m.count("epicenters", events.size());
    m.count("catalog_rows_rejected", stats.rejected);
    m.count("countries", rows.size());
    spdlog::info("compare: weighted mean distance {:.1f} km, rank correlation {:.3f}", cmp.weighted_mean_km,
                 cmp.rank_correlation);
    m.write();
  }

  void all() {
    require(cfg_.gazetteer, "gazetteer", "all");
    require(cfg_.tweets, "tweets", "all");
    require(cfg_.catalog, "catalog", "all");
    if (cfg_.style == DatasetStyle::kRealistic) {
      require(cfg_.source_tweets, "source_tweets", "all");
      require(cfg_.source_gazetteer, "source_gazetteer", "all");
    }
    ingest_gazetteer();
    preprocess();
    build_dataset();
    train_model();
    tag(TagMode::kGazetteer);
    tag(TagMode::kModel);
    evaluate();
    map(cfg_.mode);
    timeline_stage();
    compare();
  }

  void run(const std::string& stage) {
    fs::create_directories(cfg_.out_dir);
    if (stage == "ingest-gazetteer") ingest_gazetteer();
    else if (stage == "preprocess") preprocess();
    else if (stage == "build-dataset") build_dataset();
    else if (stage == "train") train_model();
    else if (stage == "tag") tag(cfg_.mode);
    else if (stage == "evaluate") evaluate();
    else if (stage == "map") map(cfg_.mode);
    else if (stage == "timeline") timeline_stage();
    else if (stage == "compare") compare();
    else if (stage == "all") all();
    else throw ConfigError("unknown subcommand " + stage);
  }

 private:
  const Gazetteer& target_gazetteer(Manifest& m, GeoNamesLoadStats* stats) {
    const auto& path = require(cfg_.gazetteer, "gazetteer", "this stage");
    m.input(path);
    if (!j_) {
      GeoNamesFilter filter;
      if (cfg_.country) filter.countries = std::set<std::string>{*cfg_.country};
      filter.feature_classes = std::set<char>(cfg_.feature_classes.begin(), cfg_.feature_classes.end());
      GeoNamesLoadStats local;
      j_ = load_geonames(path, filter, &local);
      j_stats_ = local;
    }
    if (stats) *stats = j_stats_;
    return *j_;
  }

  std::vector<std::string> target_names(const Gazetteer& j) const {
    auto names = j.name_list();
    if (cfg_.locations_limit && names.size() > cfg_.locations_limit) names.resize(cfg_.locations_limit);
    return names;
  }

  const Gazetteer& location_gazetteer(Manifest& m) {
    const auto& j = target_gazetteer(m, nullptr);
    if (!cfg_.extended_gazetteer) return j;
    m.input(*cfg_.extended_gazetteer);
    if (!l_) l_ = j.merged_with(load_geonames(*cfg_.extended_gazetteer));
    return *l_;
  }

  KeywordTable keyword_table(Manifest& m) const {
    if (!cfg_.keywords) return default_keyword_table();
    m.input(*cfg_.keywords);
    return load_keyword_table(*cfg_.keywords);
  }

  PipelineConfig cfg_;
  std::unique_ptr<GeocodeVerifier> verifier_;
  std::optional<Gazetteer> j_;
  GeoNamesLoadStats j_stats_;
  std::optional<Gazetteer> l_;
};

// Reuses a logger named "quakeloc" if the host registered one.
void init_logging() {
  auto logger = spdlog::get("quakeloc");
  if (!logger) {
    logger = spdlog::stderr_color_mt("quakeloc");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  init_logging();
  CLI::App app{"Location and disaster entity extraction from earthquake tweets"};
  app.name("quakeloc");
  std::optional<std::string> config_path, out_dir, country, style, mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> min_magnitude;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out-dir", out_dir, "artifact directory");
  app.add_option("--country", country, "ISO country code filter for the target gazetteer");
  app.add_option("--style", style, "build-dataset style: template or realistic");
  app.add_option("--mode", mode, "tag/map source: model or gazetteer");
  app.add_option("--min-magnitude", min_magnitude, "magnitude threshold for country frequencies");
  app.add_option("-D,--set", sets, "override a config key (key=value)");
  for (const auto& [name, help] : kStages) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(1, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  std::string stage = app.get_subcommands().front()->get_name();

  try {
    std::vector<std::map<std::string, std::string>> layers;
    if (config_path) layers.push_back(read_config_file(*config_path));
    std::map<std::string, std::string> flags;
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + s + "'");
      flags[std::string(trim(std::string_view(s).substr(0, eq)))] =
          std::string(trim(std::string_view(s).substr(eq + 1)));
    }
    if (seed) flags["seed"] = std::to_string(*seed);
    if (out_dir) flags["out_dir"] = *out_dir;
    if (country) flags["country"] = *country;
    if (style) flags["style"] = *style;
    if (mode) flags["mode"] = *mode;
    if (min_magnitude) flags["min_magnitude"] = fmt::format("{}", *min_magnitude);
    layers.push_back(std::move(flags));
    Pipeline pipeline(make_config(layers));
    pipeline.run(stage);
    return 0;
  } catch (const ConfigError& e) {
    spdlog::error("invalid configuration: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{} failed: {}", stage, e.what());
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace quakeloc::cli
