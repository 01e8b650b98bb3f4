#include "petro/cnl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

#include "petro/model.hpp"

namespace petro::cnl {

namespace {

constexpr std::array<std::string_view, 3> kReservedWords = {"is", "a", "of"};

bool is_reserved(std::string_view w) {
  return std::find(kReservedWords.begin(), kReservedWords.end(), w) !=
         kReservedWords.end();
}

// ---------------------------------------------------------------------------
// Sentence tokenizer
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind : std::uint8_t { name, term, string_lit, number, end };
  Kind kind = Kind::end;
  std::string text;    // name/term text, or decoded string literal
  Rational number;
  int col = 0;         // 1-based within the sentence
};

std::vector<Token> tokenize_sentence(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        char d = s[i];
        if (d == '\\' && i + 1 < s.size()) {
          value += s[i + 1];
          i += 2;
        } else if (d == '"') {
          ++i;
          closed = true;
          break;
        } else {
          value += d;
          ++i;
        }
      }
      if (!closed) {
        throw SyntaxError("unterminated string literal", col, {});
      }
      tokens.push_back({Token::Kind::string_lit, std::move(value), {}, col});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t start = i;
      if (c == '-') ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i + 1 < s.size() && s[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      std::string_view lexeme = s.substr(start, i - start);
      tokens.push_back({Token::Kind::number, std::string(lexeme),
                        parse_rational(lexeme), col});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      std::string_view word = s.substr(start, i - start);
      if (std::isupper(static_cast<unsigned char>(word[0]))) {
        if (!is_proper_name(word)) {
          throw NameError("malformed proper name '" + std::string(word) + "'", col);
        }
        tokens.push_back({Token::Kind::name, std::string(word), {}, col});
      } else {
        if (!is_term(word)) {
          throw SyntaxError("malformed term '" + std::string(word) + "'", col, {});
        }
        tokens.push_back({Token::Kind::term, std::string(word), {}, col});
      }
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", col, {});
  }
  return tokens;
}

bool is_name(const Token& t) { return t.kind == Token::Kind::name; }
bool is_plain_term(const Token& t) {
  return t.kind == Token::Kind::term && !is_reserved(t.text);
}
bool is_word(const Token& t, std::string_view w) {
  return t.kind == Token::Kind::term && t.text == w;
}
// The leading article of attribute templates; lexically it is a name token.
bool is_article(const Token& t) { return t.kind == Token::Kind::name && t.text == "A"; }

}  // namespace

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

SyntaxError::SyntaxError(std::string message, int col_, std::vector<std::string> attempted_)
    : std::runtime_error(std::move(message)), col(col_), attempted(std::move(attempted_)) {}

NameError::NameError(std::string message, int col_)
    : std::runtime_error(std::move(message)), col(col_) {}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

bool Lexicon::is_verb(std::string_view term) const {
  return verbs_.count(std::string(term)) != 0;
}

// ---------------------------------------------------------------------------
// parse_sentence: first match over the template set
// ---------------------------------------------------------------------------

SentenceAst parse_sentence(std::string_view line, const Lexicon& lexicon,
                           std::vector<std::string>* warnings) {
  // Trim and require the terminal period.
  std::string_view s = line;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty() || s.back() != '.') {
    throw SyntaxError("sentence must end with '.'",
                      static_cast<int>(s.size()) + 1, {});
  }
  s.remove_suffix(1);

  auto tokens = tokenize_sentence(s);
  if (tokens.empty()) throw SyntaxError("empty sentence", 1, {});

  static const std::vector<std::string> kTemplates = {
      "classification", "string-attribute", "number-attribute",
      "name-attribute", "relation",         "part-of"};

  // "<N> is a part of <N>."  (checked before classification so that the
  // longer fixed shape wins; the shapes have distinct arities anyway)
  if (tokens.size() == 6 && is_name(tokens[0]) && is_word(tokens[1], "is") &&
      is_word(tokens[2], "a") && is_word(tokens[3], "part") && is_word(tokens[4], "of") &&
      is_name(tokens[5])) {
    return PartOf{tokens[0].text, tokens[5].text};
  }
  // "<N> is a <T>."
  if (tokens.size() == 4 && is_name(tokens[0]) && is_word(tokens[1], "is") &&
      is_word(tokens[2], "a") && is_plain_term(tokens[3])) {
    return Classification{tokens[0].text, tokens[3].text};
  }
  // "A <T> of <N> is <literal>."
  if (tokens.size() == 6 && is_article(tokens[0]) && is_plain_term(tokens[1]) &&
      is_word(tokens[2], "of") && is_name(tokens[3]) && is_word(tokens[4], "is")) {
    const Token& obj = tokens[5];
    if (lexicon.is_verb(tokens[1].text)) {
      throw SyntaxError("verb '" + tokens[1].text + "' used as attribute term",
                        tokens[1].col, kTemplates);
    }
    switch (obj.kind) {
      case Token::Kind::string_lit:
        return StringAttribute{tokens[1].text, tokens[3].text, obj.text};
      case Token::Kind::number:
        return NumberAttribute{tokens[1].text, tokens[3].text, obj.number};
      case Token::Kind::name:
        return NameAttribute{tokens[1].text, tokens[3].text, obj.text};
      default:
        throw SyntaxError("expected a string, number or name", obj.col, kTemplates);
    }
  }
  // "<N> <verb> <N>."
  if (tokens.size() == 3 && is_name(tokens[0]) && is_plain_term(tokens[1]) &&
      is_name(tokens[2])) {
    if (!lexicon.is_verb(tokens[1].text) && warnings) {
      warnings->push_back("unknown verb '" + tokens[1].text + "'");
    }
    return Relation{tokens[0].text, tokens[1].text, tokens[2].text};
  }

  // No template matched: point at the first token that cannot start a
  // template, or the first position where all candidates diverge.
  int col = tokens[0].col;
  std::string hint = "no sentence template matches";
  if (!is_name(tokens[0]) && !is_article(tokens[0])) {
    hint = "expected a proper name or 'A' at sentence start";
  }
  throw SyntaxError(hint, col, kTemplates);
}

// ---------------------------------------------------------------------------
// parse_document
// ---------------------------------------------------------------------------

namespace {

struct RawSentence {
  std::string text;  // includes the terminal '.'
  int line = 1;      // document position of the first character
  int col = 1;
  std::vector<std::pair<int, int>> positions;  // per character of `text`
};

// Splits a document into period-terminated sentences. A '.' between two
// digits is a decimal point; a '.' inside a string literal is content.
// '#'-prefixed lines are comments.
std::vector<RawSentence> scan_sentences(std::string_view text,
                                        std::vector<Diagnostic>& errors) {
  std::vector<RawSentence> out;
  RawSentence current;
  bool in_sentence = false;
  bool in_string = false;
  bool at_line_start = true;
  int line = 1, col = 1;

  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!in_sentence) {
      if (at_line_start && c == '#') {
        while (i < text.size() && text[i] != '\n') {
          advance(text[i]);
          ++i;
        }
        if (i < text.size()) advance('\n');
        at_line_start = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        at_line_start = c == '\n' || (at_line_start && c != '\n');
        if (c == '\n') at_line_start = true;
        advance(c);
        continue;
      }
      in_sentence = true;
      current = RawSentence{};
      current.line = line;
      current.col = col;
    }
    at_line_start = false;

    if (in_string) {
      if (c == '\n') {
        errors.push_back({Severity::error, "", current.line, current.col,
                          "unterminated string literal"});
        in_string = false;
        in_sentence = false;
        advance(c);
        at_line_start = true;
        continue;
      }
      current.text += c;
      current.positions.emplace_back(line, col);
      if (c == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
        advance(c);
        ++i;
        current.text += text[i];
        current.positions.emplace_back(line, col);
        advance(text[i]);
        continue;
      }
      if (c == '"') in_string = false;
      advance(c);
      continue;
    }

    if (c == '"') {
      in_string = true;
      current.text += c;
      current.positions.emplace_back(line, col);
      advance(c);
      continue;
    }
    if (c == '.') {
      bool decimal_point = i > 0 && i + 1 < text.size() &&
                           std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                           std::isdigit(static_cast<unsigned char>(text[i + 1]));
      current.text += c;
      current.positions.emplace_back(line, col);
      advance(c);
      if (!decimal_point) {
        out.push_back(std::move(current));
        in_sentence = false;
        at_line_start = col == 1;
      }
      continue;
    }
    if (c == '\n') {
      current.text += ' ';
      current.positions.emplace_back(line, col);
      advance(c);
      at_line_start = false;
      continue;
    }
    current.text += c;
    current.positions.emplace_back(line, col);
    advance(c);
  }

  if (in_sentence) {
    std::string trimmed = current.text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
      trimmed.pop_back();
    }
    if (!trimmed.empty()) {
      errors.push_back({Severity::error, "", current.line, current.col,
                        "sentence is missing its terminal '.'"});
    }
  }
  return out;
}

}  // namespace

ParsedDocument parse_document(std::string_view text, const Lexicon& lexicon) {
  ParsedDocument doc;
  auto sentences = scan_sentences(text, doc.errors);
  for (const auto& raw : sentences) {
    std::vector<std::string> warnings;
    try {
      SentenceAst ast = parse_sentence(raw.text, lexicon, &warnings);
      doc.graph.add(ast_to_fact(ast));
    } catch (const SyntaxError& e) {
      auto [line, col] = e.col >= 1 && static_cast<std::size_t>(e.col) <= raw.positions.size()
                             ? raw.positions[e.col - 1]
                             : std::make_pair(raw.line, raw.col);
      std::string msg = e.what();
      if (!e.attempted.empty()) {
        msg += " (templates tried:";
        for (const auto& t : e.attempted) msg += " " + t;
        msg += ")";
      }
      doc.errors.push_back({Severity::error, "", line, col, msg});
    } catch (const NameError& e) {
      auto [line, col] = e.col >= 1 && static_cast<std::size_t>(e.col) <= raw.positions.size()
                             ? raw.positions[e.col - 1]
                             : std::make_pair(raw.line, raw.col);
      doc.errors.push_back({Severity::error, "", line, col, e.what()});
    }
    for (auto& w : warnings) {
      doc.warnings.push_back({Severity::warning, "", raw.line, raw.col, std::move(w)});
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Facts
// ---------------------------------------------------------------------------

Fact ast_to_fact(const SentenceAst& ast) {
  return std::visit(
      [](const auto& s) -> Fact {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Classification>) {
          return {s.name, std::string(kIsA), Term{s.term}};
        } else if constexpr (std::is_same_v<T, StringAttribute>) {
          return {s.name, s.term, s.value};
        } else if constexpr (std::is_same_v<T, NumberAttribute>) {
          return {s.name, s.term, s.value};
        } else if constexpr (std::is_same_v<T, NameAttribute>) {
          return {s.name, s.term, Name{s.object}};
        } else if constexpr (std::is_same_v<T, Relation>) {
          return {s.subject, s.verb, Name{s.object}};
        } else {
          static_assert(std::is_same_v<T, PartOf>);
          return {s.subject, std::string(kPartOf), Name{s.object}};
        }
      },
      ast);
}

namespace {

std::string escape_string(std::string_view value) {
  std::string out;
  for (char c : value) {
    if (static_cast<unsigned char>(c) < 0x20) {
      throw UnserializableFactError("string literal contains a control character");
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void require_name(std::string_view n, std::string_view role) {
  if (!is_proper_name(n)) {
    throw UnserializableFactError(std::string(role) + " '" + std::string(n) +
                                  "' is not a proper name");
  }
}

void require_term(std::string_view t, std::string_view role) {
  if (!is_term(t)) {
    throw UnserializableFactError(std::string(role) + " '" + std::string(t) +
                                  "' is not a term");
  }
}

}  // namespace

std::string generate(const Fact& fact, const Lexicon& lexicon) {
  require_name(fact.subject, "subject");
  if (fact.predicate == kIsA) {
    const Term* term = std::get_if<Term>(&fact.object);
    if (!term) throw UnserializableFactError("is_a object must be a class term");
    require_term(term->value, "class term");
    return fact.subject + " is a " + term->value + ".";
  }
  if (fact.predicate == kPartOf) {
    const Name* obj = std::get_if<Name>(&fact.object);
    if (!obj) throw UnserializableFactError("part_of object must be a name");
    require_name(obj->value, "object");
    return fact.subject + " is a part of " + obj->value + ".";
  }
  require_term(fact.predicate, "predicate");
  if (const auto* str = std::get_if<std::string>(&fact.object)) {
    return "A " + fact.predicate + " of " + fact.subject + " is \"" +
           escape_string(*str) + "\".";
  }
  if (const auto* num = std::get_if<Rational>(&fact.object)) {
    auto dec = to_decimal_string(*num);
    if (!dec) {
      throw UnserializableFactError("rational " + to_ratio_string(*num) +
                                    " has no finite decimal expansion");
    }
    return "A " + fact.predicate + " of " + fact.subject + " is " + *dec + ".";
  }
  if (const auto* name = std::get_if<Name>(&fact.object)) {
    require_name(name->value, "object");
    if (lexicon.is_verb(fact.predicate)) {
      return fact.subject + " " + fact.predicate + " " + name->value + ".";
    }
    return "A " + fact.predicate + " of " + fact.subject + " is " + name->value + ".";
  }
  throw UnserializableFactError("class term object requires the is_a predicate");
}

// ---------------------------------------------------------------------------
// FactGraph
// ---------------------------------------------------------------------------

void FactGraph::add(Fact fact) {
  std::size_t idx = facts_.size();
  index_[fact.subject].push_back(idx);
  if (const auto* name = std::get_if<Name>(&fact.object)) {
    if (name->value != fact.subject) index_[name->value].push_back(idx);
  }
  facts_.push_back(std::move(fact));
}

const std::vector<std::size_t>& FactGraph::mentioning(const std::string& name) const {
  static const std::vector<std::size_t> empty;
  auto it = index_.find(name);
  return it == index_.end() ? empty : it->second;
}

std::string FactGraph::to_triples() const {
  std::ostringstream os;
  for (const auto& fact : facts_) {
    os << fact.subject << " " << fact.predicate << " ";
    std::visit(
        [&](const auto& obj) {
          using T = std::decay_t<decltype(obj)>;
          if constexpr (std::is_same_v<T, Name>) {
            os << obj.value;
          } else if constexpr (std::is_same_v<T, Term>) {
            os << obj.value;
          } else if constexpr (std::is_same_v<T, std::string>) {
            os << '"' << escape_string(obj) << '"';
          } else {
            os << to_display_string(obj);
          }
        },
        fact.object);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string facts_to_json(const FactGraph& graph) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& fact : graph.facts()) {
    nlohmann::json j;
    j["subject"] = fact.subject;
    j["predicate"] = fact.predicate;
    std::visit(
        [&](const auto& obj) {
          using T = std::decay_t<decltype(obj)>;
          if constexpr (std::is_same_v<T, Name>) {
            j["object"] = {{"kind", "name"}, {"value", obj.value}};
          } else if constexpr (std::is_same_v<T, Term>) {
            j["object"] = {{"kind", "term"}, {"value", obj.value}};
          } else if constexpr (std::is_same_v<T, std::string>) {
            j["object"] = {{"kind", "string"}, {"value", obj}};
          } else {
            j["object"] = {{"kind", "number"}, {"value", to_ratio_string(obj)}};
          }
        },
        fact.object);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

FactGraph facts_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  FactGraph graph;
  for (const auto& j : arr) {
    Fact fact;
    fact.subject = j.at("subject").get<std::string>();
    fact.predicate = j.at("predicate").get<std::string>();
    const auto& obj = j.at("object");
    std::string kind = obj.at("kind").get<std::string>();
    std::string value = obj.at("value").get<std::string>();
    if (kind == "name") {
      fact.object = Name{value};
    } else if (kind == "term") {
      fact.object = Term{value};
    } else if (kind == "string") {
      fact.object = value;
    } else if (kind == "number") {
      fact.object = parse_rational(value);
    } else {
      throw std::runtime_error("unknown fact object kind '" + kind + "'");
    }
    graph.add(std::move(fact));
  }
  return graph;
}

}  // namespace petro::cnl
