#include <doctest.h>

#include "quakeloc/fixtures.hpp"
#include "quakeloc/kernels.hpp"

using namespace quakeloc;

namespace {

struct Corpus {
  std::vector<LocationRecord> places = fixtures::japan_records(300, 8);
  std::vector<std::string> names;
  std::vector<std::string> raw;
  std::vector<std::string> clean;

  Corpus() {
    for (const auto& r : places) names.push_back(r.name);
    fixtures::CaseStudyOptions opts;
    opts.mention_countries = true;
    for (const auto& t : fixtures::case_study_tweets(2000, places, 9, opts)) raw.push_back(t.content);
    for (const auto& c : kernels::serial::clean_contents(raw, {})) {
      if (c) clean.push_back(*c);
    }
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

}  // namespace

TEST_CASE("parallel cleaning matches the serial reference") {
  const auto& c = corpus();
  CHECK(kernels::clean_contents(c.raw, {}) == kernels::serial::clean_contents(c.raw, {}));
  CHECK(kernels::clean_contents(std::span<const std::string>{}, {}).empty());
}

TEST_CASE("parallel gazetteer tagging matches the serial reference") {
  const auto& c = corpus();
  GpeTagger tagger(c.names);
  auto par = kernels::tag_texts(tagger, c.clean);
  CHECK(par == kernels::serial::tag_texts(tagger, c.clean));
  std::size_t spans = 0;
  for (const auto& ex : par) spans += ex.spans.size();
  CHECK(spans > 0);
}

TEST_CASE("parallel prediction matches the serial reference") {
  const auto& c = corpus();
  GpeTagger tagger(c.names);
  auto gold = kernels::serial::tag_texts(tagger, std::span(c.clean).first(300));
  Hyperparams hp;
  hp.epochs = 3;
  hp.learning_rate = 1.0;
  hp.seed = 5;
  auto model = train(gold, hp);
  CHECK(kernels::predict_texts(model, c.clean) == kernels::serial::predict_texts(model, c.clean));
}

TEST_CASE("parallel nearest distances match the serial reference") {
  const auto& c = corpus();
  std::vector<LatLon> from, to;
  for (const auto& r : c.places) from.push_back({r.latitude, r.longitude});
  for (const auto& e : fixtures::usgs_catalog(4)) to.push_back({e.latitude, e.longitude});
  auto par = kernels::nearest_distances(from, to);
  CHECK(par == kernels::serial::nearest_distances(from, to));
  REQUIRE(par.size() == from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    double best = 1e300;
    for (const auto& t : to) best = std::min(best, haversine(from[i], t));
    CHECK(par[i] == best);
  }
}

TEST_CASE("thread count is reported") { CHECK(kernels::max_threads() >= 1); }
