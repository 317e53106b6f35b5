// Corpus loading and validation: comments with entity annotations,
// per-entity sentiment labels, and per-sentence dependency parses.
// Entity mentions arrive as annotations; no NER runs here.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esa/textseg.hpp"

namespace esa {

enum class EntityType { Person, Place, Organization };

// Three-class target, integer codes fixed: -1 negative, 0 neutral, +1 positive.
enum class SentimentLabel : int { Negative = -1, Neutral = 0, Positive = 1 };

constexpr int labelCode(SentimentLabel l) { return static_cast<int>(l); }
SentimentLabel labelFromCode(int code);

const char* entityTypeName(EntityType t);
EntityType entityTypeFromName(const std::string& name);

struct EntityMention {
  std::string canonical;
  std::string surface;
  int charStart = 0;  // byte offsets into Comment::text
  int charEnd = 0;    // exclusive
  EntityType entityType = EntityType::Person;

  bool operator==(const EntityMention&) const = default;
};

struct DepNode {
  int tokenIndex = 0;  // 1-based, aligned with Token::index
  int head = 0;        // 0 = root
  std::string deprel;
  std::string posTag;

  bool operator==(const DepNode&) const = default;
};

struct DependencyTree {
  int sentenceIndex = 0;
  std::vector<DepNode> nodes;

  bool operator==(const DependencyTree&) const = default;

  // posTag / deprel for a 1-based token index.
  const DepNode& node(int tokenIndex) const { return nodes.at(tokenIndex - 1); }
};

struct Comment {
  std::string id;
  std::string text;
  std::vector<EntityMention> entities;  // one element per mention occurrence
  std::vector<Sentence> sentences;
  // parallel to sentences; nullopt = parse-absent
  std::vector<std::optional<DependencyTree>> parses;

  bool operator==(const Comment&) const = default;

  const std::optional<DependencyTree>& parseFor(int sentenceIndex) const {
    return parses.at(sentenceIndex);
  }

  // Distinct canonical names in first-mention order.
  std::vector<std::string> entityCanonicals() const;
  std::vector<const EntityMention*> mentionsOf(const std::string& canonical) const;
};

struct AnnotatedInstance {
  std::string commentId;
  std::string entityCanonical;
  SentimentLabel label = SentimentLabel::Neutral;

  bool operator==(const AnnotatedInstance&) const = default;
};

struct Corpus {
  std::vector<Comment> comments;
  std::vector<AnnotatedInstance> instances;

  bool operator==(const Corpus&) const = default;

  const Comment* findComment(const std::string& id) const;
};

// checks single root, acyclicity; throws Error(CyclicTree) on violation
void validateTree(const DependencyTree& tree, const std::string& commentId);

// Loads comments.jsonl + labels.jsonl, segments every comment, validates
// all type invariants. Throws Error on MalformedRecord / DanglingLabel /
// OverlappingMentions.
Corpus loadCorpus(const std::string& commentsPath, const std::string& labelsPath);

// Attaches CoNLL-U parses (keyed by "# comment_id" / "# sent_index"
// metadata) to an already-loaded corpus. Sentences without a block stay
// parse-absent. Throws on TokenMismatch / CyclicTree.
void loadParses(const std::string& parsePath, Corpus& corpus);

// In-memory equivalents used by tests and the synthetic generator.
Corpus loadCorpusFromStrings(const std::string& commentsJsonl,
                             const std::string& labelsJsonl);
void loadParsesFromString(const std::string& conllu, Corpus& corpus);

// Writers mirroring the loaders; reloading their output yields an equal
// Corpus field-by-field.
std::string writeCommentsJsonl(const Corpus& corpus);
std::string writeLabelsJsonl(const Corpus& corpus);
std::string writeParsesConllu(const Corpus& corpus);

}  // namespace esa
