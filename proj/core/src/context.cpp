#include "esa/context.hpp"

#include <algorithm>

#include "esa/error.hpp"

namespace esa {

namespace {

// Per-entity, per-sentence token masks; tokens flagged here end up in the
// entity's context pieces.
struct MaskSet {
  // masks[entity][sentence][token0]
  std::vector<std::vector<std::vector<char>>> masks;

  MaskSet(size_t entities, const Comment& c) {
    masks.resize(entities);
    for (auto& perSent : masks) {
      perSent.resize(c.sentences.size());
      for (size_t si = 0; si < c.sentences.size(); ++si) {
        perSent[si].assign(c.sentences[si].tokens.size(), 0);
      }
    }
  }

  void markSentence(size_t ent, size_t si) {
    std::fill(masks[ent][si].begin(), masks[ent][si].end(), 1);
  }

  void markAll(size_t ent) {
    for (size_t si = 0; si < masks[ent].size(); ++si) markSentence(ent, si);
  }

  void mark(size_t ent, size_t si, int tokenIndex1) {
    auto& m = masks[ent][si];
    if (tokenIndex1 >= 1 && tokenIndex1 <= static_cast<int>(m.size())) {
      m[tokenIndex1 - 1] = 1;
    }
  }
};

std::vector<TokenSpan> masksToPieces(
    const std::vector<std::vector<char>>& perSentence) {
  std::vector<TokenSpan> pieces;
  for (size_t si = 0; si < perSentence.size(); ++si) {
    const auto& m = perSentence[si];
    int runStart = -1;
    for (int t = 0; t <= static_cast<int>(m.size()); ++t) {
      bool on = t < static_cast<int>(m.size()) && m[t];
      if (on && runStart < 0) runStart = t;
      if (!on && runStart >= 0) {
        pieces.push_back({static_cast<int>(si), runStart + 1, t});
        runStart = -1;
      }
    }
  }
  return pieces;
}

bool tokenRunMatches(const Sentence& s, size_t start,
                     const std::vector<std::string>& needle) {
  if (start + needle.size() > s.tokens.size()) return false;
  for (size_t k = 0; k < needle.size(); ++k) {
    if (s.tokens[start + k].lower != needle[k]) return false;
  }
  return true;
}

std::vector<std::string> lowerTokensOf(const std::string& phrase) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(phrase)) out.push_back(t.lower);
  return out;
}

}  // namespace

bool EntityContext::containsToken(int sentence, int tokenIndex) const {
  for (const TokenSpan& p : pieces) {
    if (p.sentence == sentence && p.fromToken <= tokenIndex &&
        tokenIndex <= p.toToken) {
      return true;
    }
  }
  return false;
}

bool EntityContext::coversSentence(int sentence) const {
  for (const TokenSpan& p : pieces) {
    if (p.sentence == sentence) return true;
  }
  return false;
}

int EntityContext::firstSentence() const {
  int best = -1;
  for (const TokenSpan& p : pieces) {
    if (best < 0 || p.sentence < best) best = p.sentence;
  }
  return best;
}

std::optional<std::pair<int, int>> mentionTokenRange(const Sentence& s,
                                                     const EntityMention& m) {
  int first = -1, last = -1;
  for (const Token& t : s.tokens) {
    if (t.charStart < m.charEnd && m.charStart < t.charEnd) {
      if (first < 0) first = t.index;
      last = t.index;
    }
  }
  if (first < 0) return std::nullopt;
  return std::make_pair(first, last);
}

std::vector<std::pair<int, int>> explicitMentionRanges(
    const Comment& comment, const Sentence& s, const std::string& canonical) {
  std::vector<std::pair<int, int>> ranges;
  for (const EntityMention& m : comment.entities) {
    if (m.canonical != canonical) continue;
    if (auto r = mentionTokenRange(s, m)) ranges.push_back(*r);
  }
  // string-level matches catch repeated, unannotated mentions
  std::vector<std::vector<std::string>> needles;
  needles.push_back(lowerTokensOf(canonical));
  for (const EntityMention& m : comment.entities) {
    if (m.canonical == canonical) {
      auto n = lowerTokensOf(m.surface);
      if (n != needles.front()) needles.push_back(std::move(n));
      break;
    }
  }
  for (const auto& needle : needles) {
    if (needle.empty()) continue;
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      if (tokenRunMatches(s, i, needle)) {
        ranges.emplace_back(static_cast<int>(i) + 1,
                            static_cast<int>(i + needle.size()));
      }
    }
  }
  std::sort(ranges.begin(), ranges.end());
  ranges.erase(std::unique(ranges.begin(), ranges.end()), ranges.end());
  return ranges;
}

std::optional<int> butSplitIndex(const Comment& comment, const Sentence& s,
                                 const std::string& left,
                                 const std::string& right) {
  auto leftRanges = explicitMentionRanges(comment, s, left);
  auto rightRanges = explicitMentionRanges(comment, s, right);
  if (leftRanges.empty() || rightRanges.empty()) return std::nullopt;
  for (const Token& t : s.tokens) {
    if (t.lower != "but") continue;
    auto allBefore = [&](const std::vector<std::pair<int, int>>& rs) {
      return std::all_of(rs.begin(), rs.end(),
                         [&](auto& r) { return r.second < t.index; });
    };
    auto allAfter = [&](const std::vector<std::pair<int, int>>& rs) {
      return std::all_of(rs.begin(), rs.end(),
                         [&](auto& r) { return r.first > t.index; });
    };
    if (allBefore(leftRanges) && allAfter(rightRanges)) return t.index;
  }
  return std::nullopt;
}

std::optional<int> comparativeIndex(
    const Comment& comment, const Sentence& s, const std::string& left,
    const std::string& right, const std::optional<DependencyTree>& tree) {
  if (!tree.has_value()) return std::nullopt;
  auto leftRanges = explicitMentionRanges(comment, s, left);
  auto rightRanges = explicitMentionRanges(comment, s, right);
  if (leftRanges.empty() || rightRanges.empty()) return std::nullopt;
  int leftLast = leftRanges.front().second;
  int rightFirst = rightRanges.front().first;
  if (leftLast >= rightFirst) return std::nullopt;
  for (int p = leftLast + 1; p < rightFirst; ++p) {
    const std::string& pos = tree->node(p).posTag;
    if (pos == "JJR" || pos == "RBR") return p;
  }
  return std::nullopt;
}

std::vector<std::vector<char>> extractLocalContext(
    const Comment& comment, const Sentence& s,
    const std::vector<std::string>& canonicals,
    const std::optional<DependencyTree>& tree) {
  const int n = static_cast<int>(s.tokens.size());
  std::vector<std::vector<char>> masks(canonicals.size(),
                                       std::vector<char>(n, 0));
  auto markRange = [&](size_t ent, int from, int to) {
    for (int t = std::max(1, from); t <= std::min(n, to); ++t) {
      masks[ent][t - 1] = 1;
    }
  };

  if (canonicals.size() == 2) {
    // ordered so [0] is the leftmost entity in the sentence
    std::vector<std::string> ordered = canonicals;
    auto r0 = explicitMentionRanges(comment, s, ordered[0]);
    auto r1 = explicitMentionRanges(comment, s, ordered[1]);
    bool swapped = false;
    if (!r0.empty() && !r1.empty() && r1.front() < r0.front()) {
      std::swap(ordered[0], ordered[1]);
      swapped = true;
    }
    size_t li = swapped ? 1 : 0;
    size_t ri = swapped ? 0 : 1;

    if (auto b = butSplitIndex(comment, s, ordered[0], ordered[1])) {
      markRange(li, 1, *b - 1);
      markRange(ri, *b + 1, n);
      return masks;
    }
    if (auto p = comparativeIndex(comment, s, ordered[0], ordered[1], tree)) {
      // comparative term goes with the left part
      markRange(li, 1, *p);
      markRange(ri, *p + 1, n);
      return masks;
    }
  }

  // default branch: +-3 windows around each mention plus the dependency
  // parent and children of the mention's head token
  for (size_t ei = 0; ei < canonicals.size(); ++ei) {
    for (auto [first, last] : explicitMentionRanges(comment, s, canonicals[ei])) {
      markRange(ei, first - 3, last + 3);
      if (tree.has_value()) {
        const DepNode& headNode = tree->node(last);
        if (headNode.head != 0) {
          masks[ei][headNode.head - 1] = 1;
        }
        for (const DepNode& node : tree->nodes) {
          if (node.head == last) masks[ei][node.tokenIndex - 1] = 1;
        }
      }
    }
  }
  return masks;
}

namespace {

// Entities whose consecutive mentions are joined by nothing but "and" or
// "," merge into one group; when a single group covers every entity the
// whole comment is shared (the many-entities-one-opinion pattern).
bool allEntitiesConnected(const Comment& comment,
                          const std::vector<std::string>& canonicals) {
  if (canonicals.size() < 2) return false;
  std::vector<const EntityMention*> mentions;
  for (const EntityMention& m : comment.entities) {
    if (std::find(canonicals.begin(), canonicals.end(), m.canonical) !=
        canonicals.end()) {
      mentions.push_back(&m);
    }
  }
  if (mentions.size() < 2) return false;
  std::sort(mentions.begin(), mentions.end(),
            [](auto* a, auto* b) { return a->charStart < b->charStart; });

  // all tokens of the comment in offset order, for the between-text test
  std::vector<const Token*> tokens;
  for (const Sentence& s : comment.sentences) {
    for (const Token& t : s.tokens) tokens.push_back(&t);
  }

  auto connected = [&](const EntityMention* a, const EntityMention* b) {
    bool sawConnector = false;
    for (const Token* t : tokens) {
      if (t->charStart >= a->charEnd && t->charEnd <= b->charStart) {
        if (t->lower != "and" && t->lower != ",") return false;
        sawConnector = true;
      }
    }
    return sawConnector;
  };

  // union-find over canonicals, driven by consecutive-mention runs
  std::map<std::string, std::string> parent;
  for (const auto& c : canonicals) parent[c] = c;
  std::function<std::string(const std::string&)> find =
      [&](const std::string& x) -> std::string {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (size_t i = 1; i < mentions.size(); ++i) {
    if (connected(mentions[i - 1], mentions[i])) {
      parent[find(mentions[i - 1]->canonical)] = find(mentions[i]->canonical);
    }
  }
  const std::string root = find(canonicals.front());
  return std::all_of(canonicals.begin(), canonicals.end(),
                     [&](const std::string& c) { return find(c) == root; });
}

bool isPersonEntity(const Comment& comment, const std::string& canonical) {
  for (const EntityMention& m : comment.entities) {
    if (m.canonical == canonical) return m.entityType == EntityType::Person;
  }
  return false;
}

}  // namespace

ContextMap extractContexts(const Comment& comment,
                           const std::vector<EntityMention>& entities,
                           const PronounSets& pronouns) {
  std::vector<std::string> canonicals;
  for (const EntityMention& m : entities) {
    if (comment.mentionsOf(m.canonical).empty()) {
      fail(ErrorKind::UnknownEntity,
           "entity '" + m.canonical + "' is not annotated on comment " +
               comment.id);
    }
    if (std::find(canonicals.begin(), canonicals.end(), m.canonical) ==
        canonicals.end()) {
      canonicals.push_back(m.canonical);
    }
  }

  MaskSet ms(canonicals.size(), comment);

  if (canonicals.size() == 1 || allEntitiesConnected(comment, canonicals)) {
    for (size_t ei = 0; ei < canonicals.size(); ++ei) ms.markAll(ei);
  } else {
    for (size_t si = 0; si < comment.sentences.size(); ++si) {
      const Sentence& s = comment.sentences[si];
      std::vector<size_t> mentioned;
      for (size_t ei = 0; ei < canonicals.size(); ++ei) {
        if (!explicitMentionRanges(comment, s, canonicals[ei]).empty()) {
          mentioned.push_back(ei);
        }
      }
      if (mentioned.size() >= 2) {
        std::vector<std::string> subset;
        for (size_t ei : mentioned) subset.push_back(canonicals[ei]);
        auto local =
            extractLocalContext(comment, s, subset, comment.parses[si]);
        for (size_t k = 0; k < mentioned.size(); ++k) {
          for (int t = 1; t <= static_cast<int>(s.tokens.size()); ++t) {
            if (local[k][t - 1]) ms.mark(mentioned[k], si, t);
          }
        }
      } else if (mentioned.size() == 1) {
        ms.markSentence(mentioned.front(), si);
      } else {
        bool hasP = false, hasNP = false;
        for (const Token& t : s.tokens) {
          hasP = hasP || pronouns.person.count(t.lower) > 0;
          hasNP = hasNP || pronouns.nonspecific.count(t.lower) > 0;
        }
        if (hasP && !hasNP) {
          bool anyPerson = false;
          for (size_t ei = 0; ei < canonicals.size(); ++ei) {
            if (isPersonEntity(comment, canonicals[ei])) {
              ms.markSentence(ei, si);
              anyPerson = true;
            }
          }
          // no person entity to take it: keep the sentence shared rather
          // than orphaned
          if (!anyPerson) {
            for (size_t ei = 0; ei < canonicals.size(); ++ei) {
              ms.markSentence(ei, si);
            }
          }
        } else {
          for (size_t ei = 0; ei < canonicals.size(); ++ei) {
            ms.markSentence(ei, si);
          }
        }
      }
    }
  }

  ContextMap out;
  for (size_t ei = 0; ei < canonicals.size(); ++ei) {
    EntityContext ctx;
    ctx.entityCanonical = canonicals[ei];
    ctx.commentId = comment.id;
    ctx.pieces = masksToPieces(ms.masks[ei]);
    out[canonicals[ei]] = std::move(ctx);
  }
  return out;
}

ContextMap extractContexts(const Comment& comment,
                           const PronounSets& pronouns) {
  return extractContexts(comment, comment.entities, pronouns);
}

ContextMap naiveContexts(const Comment& comment) {
  std::vector<std::string> canonicals = comment.entityCanonicals();
  MaskSet ms(canonicals.size(), comment);
  for (size_t si = 0; si < comment.sentences.size(); ++si) {
    const Sentence& s = comment.sentences[si];
    std::vector<size_t> mentioned;
    for (size_t ei = 0; ei < canonicals.size(); ++ei) {
      if (!explicitMentionRanges(comment, s, canonicals[ei]).empty()) {
        mentioned.push_back(ei);
      }
    }
    if (mentioned.empty()) {
      for (size_t ei = 0; ei < canonicals.size(); ++ei) {
        ms.markSentence(ei, si);
      }
    } else {
      for (size_t ei : mentioned) ms.markSentence(ei, si);
    }
  }
  ContextMap out;
  for (size_t ei = 0; ei < canonicals.size(); ++ei) {
    EntityContext ctx;
    ctx.entityCanonical = canonicals[ei];
    ctx.commentId = comment.id;
    ctx.pieces = masksToPieces(ms.masks[ei]);
    out[canonicals[ei]] = std::move(ctx);
  }
  return out;
}

}  // namespace esa
