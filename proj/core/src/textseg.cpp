#include "esa/textseg.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "esa/error.hpp"

namespace esa {

namespace {

bool isTerminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool isAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// UTF-8 curly double and single quotes. Treated as peelable punctuation so
// quoted spans still tokenize cleanly.
constexpr std::string_view kLeftDouble = "\xe2\x80\x9c";   // U+201C
constexpr std::string_view kRightDouble = "\xe2\x80\x9d";  // U+201D
constexpr std::string_view kLeftSingle = "\xe2\x80\x98";   // U+2018
constexpr std::string_view kRightSingle = "\xe2\x80\x99";  // U+2019

// Returns the byte length of a peelable punctuation mark starting at `pos`,
// or 0 if the character there is not peelable.
int peelLen(std::string_view s, size_t pos) {
  unsigned char c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80) {
    return std::ispunct(c) ? 1 : 0;
  }
  for (std::string_view q : {kLeftDouble, kRightDouble, kLeftSingle,
                             kRightSingle}) {
    if (s.substr(pos, q.size()) == q) return static_cast<int>(q.size());
  }
  return 0;
}

std::string asciiLower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Emits one token covering text[from, to) of the chunk.
void pushToken(std::vector<Token>& out, const std::string& text, int from,
               int to, int baseOffset) {
  Token t;
  t.text = text.substr(from, to - from);
  t.lower = asciiLower(t.text);
  t.charStart = baseOffset + from;
  t.charEnd = baseOffset + to;
  out.push_back(std::move(t));
}

// Splits one whitespace-delimited chunk into leading punctuation tokens,
// a core token, and trailing punctuation tokens. Runs of the same
// punctuation character collapse into a single token.
void splitChunk(std::vector<Token>& out, const std::string& text, int from,
                int to, int baseOffset) {
  std::string_view sv(text);

  // leading punctuation
  int pos = from;
  while (pos < to) {
    int n = peelLen(sv, pos);
    if (n == 0) break;
    int runEnd = pos + n;
    while (runEnd < to && sv.substr(runEnd, n) == sv.substr(pos, n)) {
      runEnd += n;
    }
    pushToken(out, text, pos, runEnd, baseOffset);
    pos = runEnd;
  }
  if (pos >= to) return;

  // trailing punctuation: walk back, collecting runs
  std::vector<std::pair<int, int>> trailing;
  int end = to;
  while (end > pos) {
    // find the widest peelable mark ending at `end`
    int n = 0;
    for (int width : {3, 1}) {
      if (end - width >= pos && peelLen(sv, end - width) == width) {
        n = width;
        break;
      }
    }
    if (n == 0) break;
    int runStart = end - n;
    while (runStart - n >= pos && sv.substr(runStart - n, n) ==
                                      sv.substr(end - n, n)) {
      runStart -= n;
    }
    trailing.emplace_back(runStart, end);
    end = runStart;
  }

  // Whole chunk was punctuation that got consumed from the back: the core
  // is empty and `trailing` holds everything.
  if (end > pos) {
    // Internal apostrophes/hyphens stay attached by construction: only the
    // edges were peeled.
    pushToken(out, text, pos, end, baseOffset);
  }
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
    pushToken(out, text, it->first, it->second, baseOffset);
  }
}

}  // namespace

bool isQuoteToken(const std::string& text) {
  return text == "\"" || text == std::string(kLeftDouble) ||
         text == std::string(kRightDouble);
}

std::vector<Token> tokenize(const std::string& text, int baseOffset) {
  std::vector<Token> out;
  int n = static_cast<int>(text.size());
  int i = 0;
  while (i < n) {
    while (i < n && isAsciiSpace(text[i])) ++i;
    if (i >= n) break;
    int j = i;
    while (j < n && !isAsciiSpace(text[j])) ++j;
    splitChunk(out, text, i, j, baseOffset);
    i = j;
  }
  for (size_t k = 0; k < out.size(); ++k) {
    out[k].index = static_cast<int>(k) + 1;
  }
  detectQuotedSpans(out);
  return out;
}

void detectQuotedSpans(std::vector<Token>& tokens) {
  for (Token& t : tokens) t.inQuote = false;
  int open = -1;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!isQuoteToken(tokens[i].text)) continue;
    if (open < 0) {
      open = static_cast<int>(i);
    } else {
      for (size_t j = open + 1; j < i; ++j) tokens[j].inQuote = true;
      open = -1;
    }
  }
}

std::vector<Sentence> splitSentences(const std::string& text) {
  int n = static_cast<int>(text.size());
  bool allSpace = true;
  for (char c : text) {
    if (!isAsciiSpace(c)) {
      allSpace = false;
      break;
    }
  }
  if (n == 0 || allSpace) {
    fail(ErrorKind::EmptyText, "splitSentences: empty or whitespace-only text");
  }

  std::vector<Sentence> sentences;
  int start = 0;
  while (start < n && isAsciiSpace(text[start])) ++start;

  int i = start;
  while (i < n) {
    if (isTerminator(text[i])) {
      // consume the whole terminator run
      int runEnd = i;
      bool question = false, exclam = false;
      while (runEnd < n && isTerminator(text[runEnd])) {
        question = question || text[runEnd] == '?';
        exclam = exclam || text[runEnd] == '!';
        ++runEnd;
      }
      Sentence s;
      s.charStart = start;
      s.charEnd = runEnd;
      s.isQuestion = question;
      s.endsExclam = exclam;
      sentences.push_back(std::move(s));
      start = runEnd;
      while (start < n && isAsciiSpace(text[start])) ++start;
      i = start;
    } else {
      ++i;
    }
  }
  if (start < n) {  // trailing sentence without a terminator
    int end = n;
    while (end > start && isAsciiSpace(text[end - 1])) --end;
    Sentence s;
    s.charStart = start;
    s.charEnd = end;
    sentences.push_back(std::move(s));
  }

  for (size_t k = 0; k < sentences.size(); ++k) {
    Sentence& s = sentences[k];
    s.index = static_cast<int>(k);
    s.tokens = tokenize(text.substr(s.charStart, s.charEnd - s.charStart),
                        s.charStart);
  }
  return sentences;
}

bool isQuestionSentence(const Sentence& s) {
  if (s.isQuestion) return true;
  if (s.tokens.empty()) return false;
  static const std::array<std::string, 6> kFiveWOneH = {
      "who", "what", "when", "where", "why", "how"};
  const std::string& first = s.tokens.front().lower;
  return std::find(kFiveWOneH.begin(), kFiveWOneH.end(), first) !=
         kFiveWOneH.end();
}

}  // namespace esa
