// Entity context extraction: routes sentences to entities (pronoun
// heuristics, and/comma grouping) and splits multi-entity sentences into
// local contexts (but-clauses, comparatives, +-3 token windows with
// dependency neighbors). Generalized to any number of entities; with two
// it reduces to the classic two-entity procedure.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "esa/corpus.hpp"

namespace esa {

struct PronounSets {
  std::set<std::string> person{"his", "her", "him", "he", "she"};
  std::set<std::string> nonspecific{"it", "their", "them"};
};

// Inclusive 1-based token index range within one sentence.
struct TokenSpan {
  int sentence = 0;
  int fromToken = 0;
  int toToken = 0;

  bool operator==(const TokenSpan&) const = default;
  auto operator<=>(const TokenSpan&) const = default;
};

struct EntityContext {
  std::string entityCanonical;
  std::string commentId;
  std::vector<TokenSpan> pieces;  // sorted, non-overlapping within a sentence

  bool operator==(const EntityContext&) const = default;

  bool containsToken(int sentence, int tokenIndex) const;
  bool coversSentence(int sentence) const;
  // Lowest sentence index with a piece, or -1 for an empty context.
  int firstSentence() const;
};

using ContextMap = std::map<std::string, EntityContext>;

// Token range of a mention inside a sentence (tokens overlapping the
// mention's byte span), or nullopt when the mention lies elsewhere.
std::optional<std::pair<int, int>> mentionTokenRange(const Sentence& s,
                                                     const EntityMention& m);

// All places where `canonical` is explicitly mentioned in sentence `s`:
// annotated spans plus case-insensitive token-run matches of the
// canonical/surface strings.
std::vector<std::pair<int, int>> explicitMentionRanges(
    const Comment& comment, const Sentence& s, const std::string& canonical);

// Sentence-level local context extraction for a sentence that explicitly
// mentions >= 2 distinct entities. Returns per-entity token masks
// (0-based token flags, one vector per entity in `canonicals` order).
// Branches: but-split and comparative-split apply only to exactly two
// entities; otherwise +-3 windows plus dependency parent/children.
std::vector<std::vector<char>> extractLocalContext(
    const Comment& comment, const Sentence& s,
    const std::vector<std::string>& canonicals,
    const std::optional<DependencyTree>& tree);

// Full routing over a comment. `entities` must all be annotated on the
// comment (Error(UnknownEntity) otherwise).
ContextMap extractContexts(const Comment& comment,
                           const std::vector<EntityMention>& entities,
                           const PronounSets& pronouns = {});

ContextMap extractContexts(const Comment& comment,
                           const PronounSets& pronouns = {});

// Baseline scheme: every sentence goes to all entities mentioned in it,
// entity-free sentences go to everyone.
ContextMap naiveContexts(const Comment& comment);

// Position of the "but" token splitting the two entities into opposite
// clauses, or nullopt. Exposed for the clue-count but-rule.
std::optional<int> butSplitIndex(const Comment& comment, const Sentence& s,
                                 const std::string& left,
                                 const std::string& right);

// Position of a JJR/RBR token strictly between the two entities' mentions,
// or nullopt. Requires a parse for the POS tags.
std::optional<int> comparativeIndex(const Comment& comment, const Sentence& s,
                                    const std::string& left,
                                    const std::string& right,
                                    const std::optional<DependencyTree>& tree);

}  // namespace esa
