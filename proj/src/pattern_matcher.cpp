#include "quakeloc/pattern_matcher.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "quakeloc/text.hpp"

namespace quakeloc {

PatternMatcher::PatternMatcher(const std::vector<std::string>& patterns) {
  nodes_.emplace_back();
  std::unordered_set<std::string> seen;
  for (const auto& p : patterns) {
    if (p.empty()) continue;
    auto folded = casefold(p);
    if (!seen.insert(folded).second) continue;

    std::int32_t node = 0;
    for (unsigned char c : folded) {
      auto& next = nodes_[node].next;
      auto it = std::lower_bound(next.begin(), next.end(), c,
                                 [](const auto& e, unsigned char b) { return e.first < b; });
      if (it != next.end() && it->first == c) {
        node = it->second;
        continue;
      }
      auto id = static_cast<std::int32_t>(nodes_.size());
      auto depth = nodes_[node].depth + 1;
      nodes_[node].next.insert(it, {c, id});
      nodes_.emplace_back();
      nodes_.back().depth = depth;
      node = id;
    }
    nodes_[node].output = static_cast<std::int32_t>(patterns_.size());
    patterns_.push_back(p);
  }

  // Breadth-first failure links.
  std::queue<std::int32_t> queue;
  for (auto [c, id] : nodes_[0].next) {
    nodes_[id].fail = 0;
    queue.push(id);
  }
  while (!queue.empty()) {
    auto node = queue.front();
    queue.pop();
    for (auto [c, id] : nodes_[node].next) {
      auto f = nodes_[node].fail;
      std::int32_t target;
      while (true) {
        target = child(f, c);
        if (target >= 0 || f == 0) break;
        f = nodes_[f].fail;
      }
      nodes_[id].fail = (target >= 0 && target != id) ? target : 0;
      auto fail = nodes_[id].fail;
      nodes_[id].output_link = nodes_[fail].output >= 0 ? fail : nodes_[fail].output_link;
      queue.push(id);
    }
  }
}

std::int32_t PatternMatcher::child(std::int32_t node, unsigned char c) const {
  const auto& next = nodes_[node].next;
  auto it = std::lower_bound(next.begin(), next.end(), c,
                             [](const auto& e, unsigned char b) { return e.first < b; });
  return (it != next.end() && it->first == c) ? it->second : -1;
}

std::vector<PatternMatch> PatternMatcher::find_all(std::string_view text) const {
  std::vector<PatternMatch> out;
  if (patterns_.empty()) return out;
  std::int32_t state = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(fold_char(text[i]));
    while (true) {
      auto t = child(state, c);
      if (t >= 0) {
        state = t;
        break;
      }
      if (state == 0) break;
      state = nodes_[state].fail;
    }
    for (auto n = nodes_[state].output >= 0 ? state : nodes_[state].output_link; n >= 0;
         n = nodes_[n].output_link) {
      std::size_t end = i + 1;
      out.push_back({end - nodes_[n].depth, end, static_cast<std::size_t>(nodes_[n].output)});
    }
  }
  return out;
}

std::vector<PatternMatch> PatternMatcher::find_words(std::string_view text) const {
  auto all = find_all(text);
  std::erase_if(all, [&](const PatternMatch& m) { return !at_word_boundaries(text, m.start, m.end); });
  return leftmost_longest(std::move(all));
}

std::vector<PatternMatch> PatternMatcher::leftmost_longest(std::vector<PatternMatch> all) {
  std::sort(all.begin(), all.end(), [](const PatternMatch& a, const PatternMatch& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  std::vector<PatternMatch> chosen;
  std::size_t free_from = 0;
  for (const auto& m : all) {
    if (m.start < free_from) continue;
    chosen.push_back(m);
    free_from = m.end;
  }
  return chosen;
}

}  // namespace quakeloc
