#pragma once

// Corpus-level data-parallel kernels. Each OpenMP kernel has a serial twin in
// quakeloc::kernels::serial that is kept as the reference implementation;
// results must be identical element for element.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quakeloc/dataset.hpp"
#include "quakeloc/preprocess.hpp"
#include "quakeloc/severity.hpp"
#include "quakeloc/tagger.hpp"

namespace quakeloc::kernels {

std::vector<std::optional<std::string>> clean_contents(std::span<const std::string> texts,
                                                       const CleanerConfig& cfg);

std::vector<AnnotatedExample> tag_texts(const GpeTagger& tagger, std::span<const std::string> texts);

std::vector<AnnotatedExample> predict_texts(const TaggerModel& model,
                                            std::span<const std::string> texts);

// Distance from each origin to its closest target, in km.
std::vector<double> nearest_distances(std::span<const LatLon> origins, std::span<const LatLon> targets);

int max_threads();

namespace serial {

std::vector<std::optional<std::string>> clean_contents(std::span<const std::string> texts,
                                                       const CleanerConfig& cfg);
std::vector<AnnotatedExample> tag_texts(const GpeTagger& tagger, std::span<const std::string> texts);
std::vector<AnnotatedExample> predict_texts(const TaggerModel& model,
                                            std::span<const std::string> texts);
std::vector<double> nearest_distances(std::span<const LatLon> origins, std::span<const LatLon> targets);

}  // namespace serial

}  // namespace quakeloc::kernels
