#include <doctest.h>

#include <map>
#include <random>

#include "helpers.hpp"
#include "quakeloc/error.hpp"
#include "quakeloc/fixtures.hpp"
#include "quakeloc/tagger.hpp"

using namespace quakeloc;

namespace {

Hyperparams quick(int epochs = 5, double dropout = 0.0, std::uint64_t seed = 1) {
  Hyperparams hp;
  hp.epochs = epochs;
  hp.dropout = dropout;
  hp.batch_start = 2;
  hp.batch_stop = 8;
  hp.learning_rate = 1.0;
  hp.seed = seed;
  return hp;
}

AnnotatedExample gpe_example(std::string text, std::string_view place) {
  auto at = text.find(place);
  return {text, {{at, at + place.size(), EntityLabel::kGpe}}};
}

// Straight transcription of the training rule with dense snapshot
// averaging. Only valid without dropout.
std::map<std::string, LabelWeights> naive_train(std::span<const AnnotatedExample> ds, const Hyperparams& hp) {
  std::map<std::string, LabelWeights> w, sum;
  std::size_t snapshots = 0;
  auto argmax = [](const LabelWeights& s) {
    std::size_t b = 0;
    for (std::size_t l = 1; l < kNumLabels; ++l) {
      if (s[l] > s[b]) b = l;
    }
    return b;
  };
  for (int e = 0; e < hp.epochs; ++e) {
    auto order = training_order(ds.size(), hp.seed, e);
    std::size_t pos = 0;
    for (std::size_t k = 0; pos < order.size(); ++k) {
      std::map<std::string, LabelWeights> delta;
      auto end = std::min(order.size(), pos + batch_size(hp, k));
      for (; pos < end; ++pos) {
        const auto& ex = ds[order[pos]];
        auto tokens = tokenize(ex.text);
        auto gold = spans_to_bio(tokens, ex.spans);
        std::optional<BioLabel> prev;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
          auto f = features(tokens, i, prev);
          LabelWeights s{};
          for (const auto& name : f) {
            auto it = w.find(name);
            if (it == w.end()) continue;
            for (std::size_t l = 0; l < kNumLabels; ++l) s[l] += it->second[l];
          }
          auto guess = argmax(s);
          auto g = static_cast<std::size_t>(gold[i]);
          if (guess != g) {
            for (const auto& name : f) {
              delta[name][g] += hp.learning_rate;
              delta[name][guess] -= hp.learning_rate;
            }
          }
          prev = kAllLabels[guess];
        }
      }
      for (const auto& [name, d] : delta) {
        for (std::size_t l = 0; l < kNumLabels; ++l) w[name][l] += d[l];
      }
      for (const auto& [name, v] : w) {
        for (std::size_t l = 0; l < kNumLabels; ++l) sum[name][l] += v[l];
      }
      ++snapshots;
    }
  }
  for (auto& [name, v] : sum) {
    for (auto& x : v) x /= static_cast<double>(snapshots);
  }
  return sum;
}

}  // namespace

TEST_CASE("tokenize") {
  auto t = tokenize("Help! Tokyo shaken.");
  REQUIRE(t.size() == 3);
  CHECK(t[0] == Token{"Help", 0, 4});
  CHECK(t[1] == Token{"Tokyo", 6, 11});
  CHECK(t[2] == Token{"shaken", 12, 18});
  CHECK(tokenize("").empty());
  auto pi = tokenize("3.14");
  REQUIRE(pi.size() == 2);
  CHECK(pi[0] == Token{"3", 0, 1});
  CHECK(pi[1] == Token{"14", 2, 4});
  CHECK(tokenize("don't panic")[0].text == "don't");
}

TEST_CASE("features") {
  auto tokens = tokenize("Tokyo hit");
  auto f = features(tokens, 0, std::nullopt);
  auto has = [&](std::string_view s) { return std::find(f.begin(), f.end(), s) != f.end(); };
  CHECK(has("bias"));
  CHECK(has("w=tokyo"));
  CHECK(has("p3=tok"));
  CHECK(has("s1=o"));
  CHECK(has("shape=Xx"));
  CHECK(has("title"));
  CHECK(has("prev=<s>"));
  CHECK(has("next=hit"));
  CHECK(has("plabel=<START>"));
  CHECK(f == features(tokens, 0, std::nullopt));
  auto g = features(tokens, 1, BioLabel::kBGpe);
  CHECK(std::find(g.begin(), g.end(), "next=</s>") != g.end());
  CHECK(std::find(g.begin(), g.end(), "plabel=B-GPE") != g.end());
  CHECK(std::find(g.begin(), g.end(), "title") == g.end());
  auto m = features(tokenize("M7 NOTO"), 0, std::nullopt);
  CHECK(std::find(m.begin(), m.end(), "shape=Xd") != m.end());
}

TEST_CASE("BIO conversion") {
  std::string text = "New York City earthquake damage";
  auto tokens = tokenize(text);
  std::vector<EntitySpan> spans{{0, 13, EntityLabel::kGpe}, {14, 24, EntityLabel::kDisaster}};
  auto bio = spans_to_bio(tokens, spans);
  CHECK(bio == std::vector<BioLabel>{BioLabel::kBGpe, BioLabel::kIGpe, BioLabel::kIGpe,
                                     BioLabel::kBDisaster, BioLabel::kO});
  CHECK(bio_to_spans(tokens, bio) == spans);

  // Spans cutting into a token widen to it.
  CHECK(bio_to_spans(tokens, spans_to_bio(tokens, std::vector<EntitySpan>{{5, 6, EntityLabel::kGpe}})) ==
        std::vector<EntitySpan>{{4, 8, EntityLabel::kGpe}});

  // An I after O or after the other type opens a new span.
  std::vector<BioLabel> repair{BioLabel::kIGpe, BioLabel::kIDisaster, BioLabel::kIDisaster, BioLabel::kO, BioLabel::kIGpe};
  CHECK(bio_to_spans(tokens, repair) ==
        std::vector<EntitySpan>{{0, 3, EntityLabel::kGpe}, {4, 13, EntityLabel::kDisaster},
                                {25, 31, EntityLabel::kGpe}});

  for (auto l : kAllLabels) CHECK(parse_bio(bio_name(l)) == l);
  CHECK_FALSE(parse_bio("B-PER").has_value());
}

TEST_CASE("BIO round trip on token-aligned spans") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    auto n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(rng() % 100);
    auto tokens = tokenize(text);
    std::vector<EntitySpan> spans;
    for (std::size_t i = 0; i < tokens.size();) {
      auto len = 1 + rng() % 3;
      auto last = std::min(tokens.size(), i + len) - 1;
      if (rng() % 2) {
        spans.push_back({tokens[i].start, tokens[last].end, rng() % 2 ? EntityLabel::kGpe : EntityLabel::kDisaster});
        i = last + 1;
      } else {
        ++i;
      }
    }
    CHECK(bio_to_spans(tokens, spans_to_bio(tokens, spans)) == spans);
  }
}

TEST_CASE("batch schedule") {
  Hyperparams hp;
  CHECK(batch_size(hp, 0) == 128);
  CHECK(batch_size(hp, 1) == 166);
  CHECK(batch_size(hp, 2) == 216);
  CHECK(batch_size(hp, 3) == 256);
  CHECK(batch_size(hp, 50) == 256);
  hp.batch_growth = 1.0;
  CHECK(batch_size(hp, 10) == 128);
}

TEST_CASE("training order is a seeded permutation") {
  auto a = training_order(50, 9, 0);
  CHECK(a == training_order(50, 9, 0));
  CHECK(a != training_order(50, 9, 1));
  CHECK(a != training_order(50, 10, 0));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  CHECK(training_order(0, 1, 0).empty());
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  CHECK_NOTHROW(hp.validate());
  auto bad = hp;
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.batch_start = 300;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.learning_rate = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("degenerate datasets") {
  CHECK_THROWS_AS(train({}, quick()), Error);
  std::vector<AnnotatedExample> all_o{{"nothing here", {}}, {"still nothing", {}}};
  auto m = train(all_o, quick(3));
  for (double l : m.meta().epoch_loss) CHECK(l == 0.0);
  CHECK(m.predict("nothing here").empty());
  std::vector<AnnotatedExample> bad{{"abc", {{1, 9, EntityLabel::kGpe}}}};
  CHECK_THROWS_AS(train(bad, quick()), Error);
}

TEST_CASE("zero weights decode to O") {
  TaggerModel empty;
  CHECK(empty.predict("Tokyo was hit").empty());
  CHECK(empty.predict("").empty());
  LabelWeights ties{};
  CHECK(best_label(ties) == BioLabel::kO);
  CHECK(best_label({0, 1, 1, 0, 0}) == BioLabel::kBGpe);
}

TEST_CASE("a consistently tagged name generalizes to unseen contexts") {
  std::vector<AnnotatedExample> ds;
  const std::vector<std::string> frames{"Houses collapsed in {} last night",   "{} reports strong shaking",
                                        "Rescue teams reached {} this morning", "Praying for everyone in {}",
                                        "The road to {} is blocked",           "Power is out across {} tonight"};
  const std::vector<std::string> places{"Zorania", "Suzu", "Wajima", "Nanao", "Anamizu"};
  for (const auto& f : frames) {
    for (const auto& p : places) {
      auto text = f;
      text.replace(text.find("{}"), 2, p);
      ds.push_back(gpe_example(text, p));
    }
  }
  auto m = train(ds, quick(10, 0.2, 4));
  std::string unseen = "Volunteers from Zorania arrived";
  auto spans = m.predict(unseen);
  std::vector<EntitySpan> expect{{16, 23, EntityLabel::kGpe}};
  CHECK(spans == expect);
}

TEST_CASE("averaged weights match a dense reference") {
  std::vector<AnnotatedExample> ds{gpe_example("Suzu was hit hard", "Suzu"),
                                   {"earthquake hits Wajima", {{0, 10, EntityLabel::kDisaster}, {16, 22, EntityLabel::kGpe}}}};
  for (std::size_t batch : {1u, 2u}) {
    auto hp = quick(4, 0.0, 11);
    hp.batch_start = batch;
    hp.batch_stop = 2;
    hp.learning_rate = 0.5;
    auto m = train(ds, hp);
    auto ref = naive_train(ds, hp);
    std::size_t nonzero = 0;
    for (const auto& [name, w] : ref) {
      for (std::size_t l = 0; l < kNumLabels; ++l) {
        CHECK(m.weight(name, kAllLabels[l]) == doctest::Approx(w[l]).epsilon(1e-12));
        nonzero += w[l] != 0.0;
      }
    }
    CHECK(nonzero > 0);
    for (const auto& name : m.feature_names()) CHECK(ref.count(name) == 1);
  }
}

TEST_CASE("training is deterministic and serialization is exact") {
  auto places = fixtures::japan_records(40, 2);
  auto tweets = fixtures::case_study_tweets(120, places, 5);
  std::vector<std::string> names;
  for (const auto& r : places) names.push_back(r.name);
  std::vector<CleanTweet> clean;
  for (const auto& t : tweets) clean.push_back({t.id, t.timestamp, t.content});
  auto ds = tag_disaster(tag_gpe(clean, names), default_keyword_table());

  auto a = train(ds, quick(3, 0.2, 77));
  auto b = train(ds, quick(3, 0.2, 77));
  CHECK(a == b);
  CHECK(a.serialize() == b.serialize());
  CHECK(a.meta().dataset_fingerprint == dataset_fingerprint(ds));
  CHECK(a.meta().hyperparams.seed == 77);
  CHECK(a.meta().epoch_loss.size() == 3);
  auto c = train(ds, quick(3, 0.2, 78));
  CHECK_FALSE(a == c);

  auto back = TaggerModel::deserialize(a.serialize());
  CHECK(back == a);
  CHECK(back.serialize() == a.serialize());
  testing::TempDir dir("tg");
  a.save(dir / "m.json");
  CHECK(TaggerModel::load(dir / "m.json") == a);

  for (const auto& ex : ds) {
    auto spans = a.predict(ex.text);
    std::size_t prev_end = 0;
    for (const auto& s : spans) {
      CHECK(s.start >= prev_end);
      CHECK(s.start < s.end);
      CHECK(s.end <= ex.text.size());
      prev_end = s.end;
    }
    CHECK(spans == back.predict(ex.text));
  }
  CHECK_THROWS_AS(TaggerModel::deserialize("{}"), Error);
  CHECK_THROWS_AS(TaggerModel::deserialize("nope"), Error);
  CHECK_THROWS_AS(TaggerModel::load(dir / "absent.json"), Error);
}
