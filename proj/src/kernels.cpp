#include "quakeloc/kernels.hpp"

#include <omp.h>

#include <limits>

namespace quakeloc::kernels {

namespace {

double nearest(LatLon from, std::span<const LatLon> targets) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : targets) best = std::min(best, haversine(from, t));
  return best;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<std::optional<std::string>> clean_contents(std::span<const std::string> texts,
                                                       const CleanerConfig& cfg) {
  std::vector<std::optional<std::string>> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = clean(texts[i], cfg);
  return out;
}

std::vector<AnnotatedExample> tag_texts(const GpeTagger& tagger, std::span<const std::string> texts) {
  std::vector<AnnotatedExample> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = tagger.tag(texts[i]);
  return out;
}

std::vector<AnnotatedExample> predict_texts(const TaggerModel& model,
                                            std::span<const std::string> texts) {
  std::vector<AnnotatedExample> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = {texts[i], model.predict(texts[i])};
  return out;
}

std::vector<double> nearest_distances(std::span<const LatLon> origins, std::span<const LatLon> targets) {
  std::vector<double> out(origins.size());
  const auto n = static_cast<std::ptrdiff_t>(origins.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nearest(origins[i], targets);
  return out;
}

namespace serial {

std::vector<std::optional<std::string>> clean_contents(std::span<const std::string> texts,
                                                       const CleanerConfig& cfg) {
  std::vector<std::optional<std::string>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(clean(t, cfg));
  return out;
}

std::vector<AnnotatedExample> tag_texts(const GpeTagger& tagger, std::span<const std::string> texts) {
  std::vector<AnnotatedExample> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tagger.tag(t));
  return out;
}

std::vector<AnnotatedExample> predict_texts(const TaggerModel& model,
                                            std::span<const std::string> texts) {
  std::vector<AnnotatedExample> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back({t, model.predict(t)});
  return out;
}

std::vector<double> nearest_distances(std::span<const LatLon> origins, std::span<const LatLon> targets) {
  std::vector<double> out;
  out.reserve(origins.size());
  for (const auto& o : origins) out.push_back(nearest(o, targets));
  return out;
}

}  // namespace serial

}  // namespace quakeloc::kernels
