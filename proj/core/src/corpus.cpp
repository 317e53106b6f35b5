#include "esa/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "esa/error.hpp"

namespace esa {

using json = nlohmann::json;

SentimentLabel labelFromCode(int code) {
  switch (code) {
    case -1: return SentimentLabel::Negative;
    case 0: return SentimentLabel::Neutral;
    case 1: return SentimentLabel::Positive;
    default:
      fail(ErrorKind::MalformedRecord,
           "label must be -1, 0 or 1, got " + std::to_string(code));
  }
}

const char* entityTypeName(EntityType t) {
  switch (t) {
    case EntityType::Person: return "person";
    case EntityType::Place: return "place";
    case EntityType::Organization: return "organization";
  }
  return "person";
}

EntityType entityTypeFromName(const std::string& name) {
  if (name == "person") return EntityType::Person;
  if (name == "place") return EntityType::Place;
  if (name == "organization") return EntityType::Organization;
  fail(ErrorKind::MalformedRecord, "unknown entity type: " + name);
}

std::vector<std::string> Comment::entityCanonicals() const {
  std::vector<std::string> out;
  for (const EntityMention& m : entities) {
    if (std::find(out.begin(), out.end(), m.canonical) == out.end()) {
      out.push_back(m.canonical);
    }
  }
  return out;
}

std::vector<const EntityMention*> Comment::mentionsOf(
    const std::string& canonical) const {
  std::vector<const EntityMention*> out;
  for (const EntityMention& m : entities) {
    if (m.canonical == canonical) out.push_back(&m);
  }
  return out;
}

const Comment* Corpus::findComment(const std::string& id) const {
  for (const Comment& c : comments) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void validateTree(const DependencyTree& tree, const std::string& commentId) {
  const int n = static_cast<int>(tree.nodes.size());
  int roots = 0;
  for (const DepNode& node : tree.nodes) {
    if (node.head == 0) ++roots;
    if (node.head < 0 || node.head > n) {
      fail(ErrorKind::CyclicTree,
           "comment " + commentId + ": head index out of range");
    }
  }
  if (roots != 1) {
    fail(ErrorKind::CyclicTree,
         "comment " + commentId + ": tree must have exactly one root, has " +
             std::to_string(roots));
  }
  // every node must reach the root without revisiting
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0) {
      cur = tree.nodes[cur - 1].head;
      if (++steps > n) {
        fail(ErrorKind::CyclicTree,
             "comment " + commentId + ": cycle through token " +
                 std::to_string(i));
      }
    }
  }
}

namespace {

json parseLine(const std::string& line, int lineNo) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorKind::MalformedRecord,
         "line " + std::to_string(lineNo) + ": not a JSON object");
  }
  return j;
}

template <typename T>
T field(const json& j, const char* name, int lineNo) {
  auto it = j.find(name);
  if (it == j.end()) {
    fail(ErrorKind::MalformedRecord,
         "line " + std::to_string(lineNo) + ": missing field '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::MalformedRecord,
         "line " + std::to_string(lineNo) + ": bad type for field '" + name +
             "'");
  }
}

Comment parseCommentRecord(const json& j, int lineNo) {
  Comment c;
  c.id = field<std::string>(j, "id", lineNo);
  c.text = field<std::string>(j, "text", lineNo);
  if (c.id.empty()) {
    fail(ErrorKind::MalformedRecord,
         "line " + std::to_string(lineNo) + ": empty comment id");
  }
  auto ents = field<json>(j, "entities", lineNo);
  if (!ents.is_array()) {
    fail(ErrorKind::MalformedRecord,
         "line " + std::to_string(lineNo) + ": 'entities' must be an array");
  }
  for (const json& e : ents) {
    EntityMention m;
    m.canonical = field<std::string>(e, "canonical", lineNo);
    m.surface = field<std::string>(e, "surface", lineNo);
    m.charStart = field<int>(e, "start", lineNo);
    m.charEnd = field<int>(e, "end", lineNo);
    try {
      m.entityType = entityTypeFromName(field<std::string>(e, "type", lineNo));
    } catch (const Error&) {
      fail(ErrorKind::MalformedRecord,
           "line " + std::to_string(lineNo) + ": bad entity type");
    }
    c.entities.push_back(std::move(m));
  }
  return c;
}

void validateComment(const Comment& c, int lineNo) {
  const int n = static_cast<int>(c.text.size());
  for (const EntityMention& m : c.entities) {
    if (m.charStart >= m.charEnd || m.charStart < 0 || m.charEnd > n) {
      fail(ErrorKind::MalformedRecord,
           "line " + std::to_string(lineNo) + ": mention span out of bounds (" +
               m.canonical + ")");
    }
    if (c.text.substr(m.charStart, m.charEnd - m.charStart) != m.surface) {
      fail(ErrorKind::MalformedRecord,
           "line " + std::to_string(lineNo) + ": surface mismatch for '" +
               m.canonical + "'");
    }
  }
  // mention spans must not overlap
  std::vector<const EntityMention*> sorted;
  for (const EntityMention& m : c.entities) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(),
            [](const EntityMention* a, const EntityMention* b) {
              return a->charStart < b->charStart;
            });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->charStart < sorted[i - 1]->charEnd) {
      fail(ErrorKind::OverlappingMentions,
           "comment " + c.id + ": mentions '" + sorted[i - 1]->canonical +
               "' and '" + sorted[i]->canonical + "' overlap");
    }
  }
}

Corpus loadCorpusImpl(std::istream& commentsIn, std::istream& labelsIn) {
  Corpus corpus;
  std::unordered_map<std::string, size_t> byId;

  std::string line;
  int lineNo = 0;
  while (std::getline(commentsIn, line)) {
    ++lineNo;
    if (line.empty()) continue;
    json j = parseLine(line, lineNo);
    Comment c = parseCommentRecord(j, lineNo);
    validateComment(c, lineNo);
    if (byId.count(c.id)) {
      fail(ErrorKind::MalformedRecord,
           "line " + std::to_string(lineNo) + ": duplicate comment id " + c.id);
    }
    c.sentences = splitSentences(c.text);
    c.parses.assign(c.sentences.size(), std::nullopt);
    byId[c.id] = corpus.comments.size();
    corpus.comments.push_back(std::move(c));
  }

  std::unordered_set<std::string> seenPairs;
  lineNo = 0;
  while (std::getline(labelsIn, line)) {
    ++lineNo;
    if (line.empty()) continue;
    json j = parseLine(line, lineNo);
    AnnotatedInstance inst;
    inst.commentId = field<std::string>(j, "comment_id", lineNo);
    inst.entityCanonical = field<std::string>(j, "entity", lineNo);
    inst.label = labelFromCode(field<int>(j, "label", lineNo));

    auto it = byId.find(inst.commentId);
    if (it == byId.end()) {
      fail(ErrorKind::DanglingLabel,
           "label line " + std::to_string(lineNo) + ": unknown comment id " +
               inst.commentId);
    }
    const Comment& c = corpus.comments[it->second];
    if (c.mentionsOf(inst.entityCanonical).empty()) {
      fail(ErrorKind::DanglingLabel,
           "label line " + std::to_string(lineNo) + ": entity '" +
               inst.entityCanonical + "' not annotated on comment " +
               inst.commentId);
    }
    std::string key = inst.commentId + "\x1f" + inst.entityCanonical;
    if (!seenPairs.insert(key).second) {
      fail(ErrorKind::MalformedRecord,
           "label line " + std::to_string(lineNo) + ": duplicate label for (" +
               inst.commentId + ", " + inst.entityCanonical + ")");
    }
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

struct ConlluBlock {
  std::string commentId;
  int sentIndex = -1;
  std::vector<DepNode> nodes;
};

void attachBlock(const ConlluBlock& block, Corpus& corpus) {
  if (block.commentId.empty() || block.sentIndex < 0) {
    fail(ErrorKind::MalformedRecord,
         "CoNLL-U block missing '# comment_id' or '# sent_index' metadata");
  }
  Comment* target = nullptr;
  for (Comment& c : corpus.comments) {
    if (c.id == block.commentId) {
      target = &c;
      break;
    }
  }
  if (target == nullptr) {
    fail(ErrorKind::MalformedRecord,
         "CoNLL-U block references unknown comment " + block.commentId);
  }
  if (block.sentIndex >= static_cast<int>(target->sentences.size())) {
    fail(ErrorKind::TokenMismatch,
         "comment " + block.commentId + ": sent_index " +
             std::to_string(block.sentIndex) + " out of range");
  }
  const Sentence& s = target->sentences[block.sentIndex];
  if (block.nodes.size() != s.tokens.size()) {
    fail(ErrorKind::TokenMismatch,
         "comment " + block.commentId + " sentence " +
             std::to_string(block.sentIndex) + ": CoNLL-U has " +
             std::to_string(block.nodes.size()) + " tokens, segmenter has " +
             std::to_string(s.tokens.size()));
  }
  DependencyTree tree;
  tree.sentenceIndex = block.sentIndex;
  tree.nodes = block.nodes;
  validateTree(tree, block.commentId);
  target->parses[block.sentIndex] = std::move(tree);
}

void loadParsesImpl(std::istream& in, Corpus& corpus) {
  ConlluBlock block;
  bool haveRows = false;
  std::string line;
  int lineNo = 0;

  auto flush = [&]() {
    if (haveRows) attachBlock(block, corpus);
    block = ConlluBlock{};
    haveRows = false;
  };

  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(value);
        if (key == "comment_id") block.commentId = value;
        if (key == "sent_index") block.sentIndex = std::stoi(value);
      }
      continue;
    }
    // 10-column token row
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 8) {
      fail(ErrorKind::MalformedRecord,
           "CoNLL-U line " + std::to_string(lineNo) + ": expected 10 columns");
    }
    if (cols[0].find('-') != std::string::npos ||
        cols[0].find('.') != std::string::npos) {
      continue;  // multiword-token / empty-node rows carry no tree structure
    }
    DepNode node;
    node.tokenIndex = std::stoi(cols[0]);
    node.posTag = cols[4] != "_" ? cols[4] : (cols[3] != "_" ? cols[3] : "");
    node.head = std::stoi(cols[6]);
    node.deprel = cols[7] != "_" ? cols[7] : "";
    if (node.tokenIndex != static_cast<int>(block.nodes.size()) + 1) {
      fail(ErrorKind::MalformedRecord,
           "CoNLL-U line " + std::to_string(lineNo) +
               ": token ids must be 1-based and contiguous");
    }
    block.nodes.push_back(std::move(node));
    haveRows = true;
  }
  flush();
}

std::string jsonEscape(const std::string& s) {
  return json(s).dump();
}

}  // namespace

Corpus loadCorpus(const std::string& commentsPath,
                  const std::string& labelsPath) {
  std::ifstream comments(commentsPath);
  if (!comments) {
    fail(ErrorKind::MalformedRecord, "cannot open " + commentsPath);
  }
  std::ifstream labels(labelsPath);
  if (!labels) {
    fail(ErrorKind::MalformedRecord, "cannot open " + labelsPath);
  }
  return loadCorpusImpl(comments, labels);
}

Corpus loadCorpusFromStrings(const std::string& commentsJsonl,
                             const std::string& labelsJsonl) {
  std::istringstream comments(commentsJsonl);
  std::istringstream labels(labelsJsonl);
  return loadCorpusImpl(comments, labels);
}

void loadParses(const std::string& parsePath, Corpus& corpus) {
  std::ifstream in(parsePath);
  if (!in) {
    fail(ErrorKind::MalformedRecord, "cannot open " + parsePath);
  }
  loadParsesImpl(in, corpus);
}

void loadParsesFromString(const std::string& conllu, Corpus& corpus) {
  std::istringstream in(conllu);
  loadParsesImpl(in, corpus);
}

std::string writeCommentsJsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const Comment& c : corpus.comments) {
    json ents = json::array();
    for (const EntityMention& m : c.entities) {
      ents.push_back({{"canonical", m.canonical},
                      {"surface", m.surface},
                      {"start", m.charStart},
                      {"end", m.charEnd},
                      {"type", entityTypeName(m.entityType)}});
    }
    json j = {{"id", c.id}, {"text", c.text}, {"entities", ents}};
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string writeLabelsJsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const AnnotatedInstance& inst : corpus.instances) {
    json j = {{"comment_id", inst.commentId},
              {"entity", inst.entityCanonical},
              {"label", labelCode(inst.label)}};
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string writeParsesConllu(const Corpus& corpus) {
  std::ostringstream out;
  for (const Comment& c : corpus.comments) {
    for (size_t si = 0; si < c.sentences.size(); ++si) {
      if (!c.parses[si].has_value()) continue;
      const DependencyTree& tree = *c.parses[si];
      const Sentence& s = c.sentences[si];
      out << "# comment_id = " << c.id << "\n";
      out << "# sent_index = " << si << "\n";
      for (size_t ti = 0; ti < tree.nodes.size(); ++ti) {
        const DepNode& n = tree.nodes[ti];
        const std::string& form = s.tokens[ti].text;
        out << n.tokenIndex << "\t" << form << "\t_\t_\t"
            << (n.posTag.empty() ? "_" : n.posTag) << "\t_\t" << n.head << "\t"
            << (n.deprel.empty() ? "_" : n.deprel) << "\t_\t_\n";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace esa
