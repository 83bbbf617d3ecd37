// Serial reference vs OpenMP kernels on desk-scale fixture data.

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include "quakeloc/fixtures.hpp"
#include "quakeloc/kernels.hpp"

namespace {

using namespace quakeloc;

struct Data {
  std::vector<std::string> raw_texts;
  std::vector<std::string> clean_texts;
  GpeTagger tagger;
  TaggerModel model;
  std::vector<LatLon> origins;
  std::vector<LatLon> targets;
};

const Data& data() {
  static const Data d = [] {
    spdlog::set_level(spdlog::level::warn);
    auto records = fixtures::japan_records(2000, 3);
    Gazetteer g(records);
    auto tweets = fixtures::case_study_tweets(20000, records, 3);
    std::vector<std::string> raw;
    for (const auto& t : tweets) raw.push_back(t.content);
    auto clean = preprocess_corpus(tweets);
    std::vector<std::string> texts;
    for (const auto& t : clean) texts.push_back(t.content);
    auto train_set = tag_gpe(std::span(clean).first(3000), g.name_list());
    Hyperparams hp;
    hp.epochs = 5;
    auto model = train(train_set, hp);
    std::vector<LatLon> origins, targets;
    for (const auto& r : records) origins.push_back({r.latitude, r.longitude});
    for (const auto& e : fixtures::usgs_catalog(3)) targets.push_back({e.latitude, e.longitude});
    while (targets.size() < 2000) targets.push_back(targets[targets.size() % 40]);
    return Data{std::move(raw), std::move(texts), GpeTagger(g.name_list()), std::move(model),
                std::move(origins), std::move(targets)};
  }();
  return d;
}

template <bool Parallel>
void BM_clean(benchmark::State& state) {
  const auto& d = data();
  CleanerConfig cfg;
  for (auto _ : state) {
    auto out = Parallel ? kernels::clean_contents(d.raw_texts, cfg) : kernels::serial::clean_contents(d.raw_texts, cfg);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.raw_texts.size()));
}

template <bool Parallel>
void BM_tag(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    auto out = Parallel ? kernels::tag_texts(d.tagger, d.clean_texts) : kernels::serial::tag_texts(d.tagger, d.clean_texts);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.clean_texts.size()));
}

template <bool Parallel>
void BM_predict(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    auto out = Parallel ? kernels::predict_texts(d.model, d.clean_texts)
                        : kernels::serial::predict_texts(d.model, d.clean_texts);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.clean_texts.size()));
}

template <bool Parallel>
void BM_nearest(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) {
    auto out = Parallel ? kernels::nearest_distances(d.origins, d.targets)
                        : kernels::serial::nearest_distances(d.origins, d.targets);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.origins.size()));
}

}  // namespace

BENCHMARK(BM_clean<false>)->Name("clean/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_clean<true>)->Name("clean/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tag<false>)->Name("tag_gpe/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tag<true>)->Name("tag_gpe/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict<false>)->Name("predict/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict<true>)->Name("predict/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest<false>)->Name("nearest/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest<true>)->Name("nearest/openmp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
