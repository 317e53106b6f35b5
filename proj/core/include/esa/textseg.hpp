// Deterministic sentence splitting, tokenization, quoted-span and
// question-sentence detection. Everything downstream (context extraction,
// clue counting, features) consumes these spans, so the rules here are
// intentionally rigid: same input text, same output, byte for byte.

#pragma once

#include <string>
#include <vector>

namespace esa {

struct Token {
  int index = 0;  // 1-based within the sentence, matches CoNLL-U ids
  std::string text;
  std::string lower;
  int charStart = 0;  // byte offsets into the comment text
  int charEnd = 0;    // exclusive
  bool inQuote = false;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  int index = 0;  // 0-based within the comment
  int charStart = 0;
  int charEnd = 0;
  std::vector<Token> tokens;
  bool isQuestion = false;   // terminator run contains '?'
  bool endsExclam = false;   // terminator run contains '!'

  bool operator==(const Sentence&) const = default;
};

// Splits on '.', '?' and '!'. Runs of terminators ("?!", "...") stay with
// the preceding sentence. Tokens are filled in, with quoted spans marked.
// Throws Error(EmptyText) when the input is whitespace-only.
std::vector<Sentence> splitSentences(const std::string& text);

// Whitespace split, then leading/trailing punctuation peeled into separate
// tokens (runs of the same character stay together, so "..." is one token).
// Internal apostrophes and hyphens stay attached. Offsets are relative to
// the given string plus `baseOffset`.
std::vector<Token> tokenize(const std::string& text, int baseOffset = 0);

// Marks tokens strictly between a matched pair of double-quote tokens
// (ASCII or curly) with inQuote = true. An unmatched trailing quote marks
// nothing.
void detectQuotedSpans(std::vector<Token>& tokens);

// True iff the sentence ends in '?' or starts with a 5W1H word
// (who/what/when/where/why/how).
bool isQuestionSentence(const Sentence& s);

// True for "quote tokens": ASCII '"' or a curly double quote.
bool isQuoteToken(const std::string& text);

}  // namespace esa
