// Copyright 2026 The CID Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cid/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace cid {

DslError::DslError(ParseIssue issue)
    : CidError(ErrorCode::kParse, Format(issue)), issue_(std::move(issue)) {}

std::string DslError::Format(const ParseIssue& issue) {
  std::ostringstream out;
  if (!issue.pointer.empty()) {
    out << "at " << issue.pointer << ": ";
  } else if (issue.span.line > 0) {
    out << issue.span.line << ":" << issue.span.column << ": ";
  }
  out << issue.message;
  if (!issue.expected.empty()) {
    out << " (expected ";
    for (size_t i = 0; i < issue.expected.size(); ++i) {
      if (i) out << ", ";
      out << issue.expected[i];
    }
    out << ")";
  }
  return out.str();
}

namespace {

// --- Lexing -------------------------------------------------------------

enum class TokKind { kIdent, kNumber, kPunct, kEnd };

struct Token {
  TokKind kind = TokKind::kEnd;
  std::string text;
  double number = 0.0;
  SourceSpan span;
};

[[noreturn]] void TextError(SourceSpan span, std::string message,
                            std::vector<std::string> expected = {}) {
  throw DslError(ParseIssue{span, "", std::move(message), std::move(expected)});
}

std::vector<Token> Lex(const std::string& text) {
  std::vector<Token> toks;
  int line = 1;
  int col = 1;
  size_t i = 0;
  const size_t n = text.size();
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (text[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };
  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      size_t j = i;
      while (j < n && text[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    SourceSpan span{line, col, 1};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                       text[j] == '_')) {
        ++j;
      }
      span.length = static_cast<int>(j - i);
      toks.push_back({TokKind::kIdent, text.substr(i, j - i), 0.0, span});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < n && text[i + 1] == '>') {
      span.length = 2;
      toks.push_back({TokKind::kPunct, "->", 0.0, span});
      advance(2);
      continue;
    }
    bool starts_number =
        std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '.') && i + 1 < n &&
         (std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
          (c == '-' && text[i + 1] == '.' && i + 2 < n &&
           std::isdigit(static_cast<unsigned char>(text[i + 2])))));
    if (starts_number) {
      size_t j = i;
      if (text[j] == '-') ++j;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '.') {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(text[j])))
            ++j;
        }
      }
      std::string lexeme = text.substr(i, j - i);
      span.length = static_cast<int>(j - i);
      toks.push_back(
          {TokKind::kNumber, lexeme, std::strtod(lexeme.c_str(), nullptr),
           span});
      advance(j - i);
      continue;
    }
    if (std::strchr("{}[]():;,", c) != nullptr) {
      toks.push_back({TokKind::kPunct, std::string(1, c), 0.0, span});
      advance(1);
      continue;
    }
    TextError(span, std::string("unexpected character '") + c + "'");
  }
  toks.push_back({TokKind::kEnd, "", 0.0, SourceSpan{line, col, 0}});
  return toks;
}

// --- Parsing ------------------------------------------------------------

struct RawRow {
  SourceSpan span;
  std::vector<Token> key;
  std::vector<std::pair<Token, Token>> dist;  // cpt rows: (outcome, number)
  Token value;                                // table rows
};

struct RawNode {
  NodeKind kind = NodeKind::kChance;
  Token name;
  Token agent;  // text empty when absent
  std::vector<Token> domain;
  bool has_domain = false;
  std::vector<Token> parents;
  bool has_parents = false;
  bool world = false;
  bool has_mech = false;
  SourceSpan mech_span;
  std::vector<RawRow> rows;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  void Run() {
    while (Peek().kind != TokKind::kEnd) {
      Token head = ExpectIdent("a declaration");
      if (head.text == "agent") {
        agents.push_back(ExpectName("agent name"));
        ExpectPunct(";");
      } else if (head.text == "chance") {
        ParseNode(NodeKind::kChance);
      } else if (head.text == "decision") {
        ParseNode(NodeKind::kDecision);
      } else if (head.text == "utility") {
        ParseNode(NodeKind::kUtility);
      } else {
        TextError(head.span, "expected a declaration",
                  {"agent", "chance", "decision", "utility"});
      }
    }
  }

  std::vector<Token> agents;
  std::vector<RawNode> nodes;

 private:
  const Token& Peek() const { return toks_[pos_]; }
  Token Next() { return toks_[pos_++]; }

  bool AtPunct(const char* p) const {
    return Peek().kind == TokKind::kPunct && Peek().text == p;
  }

  Token ExpectPunct(const char* p) {
    if (!AtPunct(p)) {
      TextError(Peek().span, "unexpected " + Describe(Peek()),
                {std::string("'") + p + "'"});
    }
    return Next();
  }

  Token ExpectIdent(const char* what) {
    if (Peek().kind != TokKind::kIdent) {
      TextError(Peek().span, "unexpected " + Describe(Peek()),
                {std::string(what)});
    }
    return Next();
  }

  // Structure words are contextual: every grammar position that takes a
  // name is unambiguous, so "agent", "domain", etc. are legal names. Only
  // the wildcard marker stays reserved.
  Token ExpectName(const char* what) {
    Token t = ExpectIdent(what);
    if (t.text == "_") {
      TextError(t.span, "'_' is reserved for wildcard row keys");
    }
    return t;
  }

  Token ExpectNumber() {
    if (Peek().kind != TokKind::kNumber) {
      TextError(Peek().span, "unexpected " + Describe(Peek()), {"a number"});
    }
    return Next();
  }

  static std::string Describe(const Token& t) {
    switch (t.kind) {
      case TokKind::kIdent:
        return "'" + t.text + "'";
      case TokKind::kNumber:
        return "number '" + t.text + "'";
      case TokKind::kPunct:
        return "'" + t.text + "'";
      case TokKind::kEnd:
        return "end of input";
    }
    return "token";
  }

  // [ IDENT ("," IDENT)* ] with names checked against reserved words.
  std::vector<Token> ParseNameList(bool allow_empty, const char* what) {
    ExpectPunct("[");
    std::vector<Token> items;
    if (AtPunct("]")) {
      Token close = Next();
      if (!allow_empty) {
        TextError(close.span, std::string(what) + " must list at least one name");
      }
      return items;
    }
    while (true) {
      items.push_back(ExpectName(what));
      if (AtPunct(",")) {
        Next();
        continue;
      }
      break;
    }
    ExpectPunct("]");
    return items;
  }

  void ParseNode(NodeKind kind) {
    RawNode node;
    node.kind = kind;
    node.name = ExpectName("node name");
    if (Peek().kind == TokKind::kIdent && Peek().text == "of") {
      Next();
      node.agent = ExpectName("agent name");
      if (kind == NodeKind::kChance) {
        TextError(node.agent.span, "chance nodes have no owner");
      }
    } else if (kind != NodeKind::kChance) {
      TextError(node.name.span,
                std::string(KindName(kind)) + " node '" + node.name.text +
                    "' needs an owner: " + KindName(kind) + " " +
                    node.name.text + " of <agent>");
    }
    ExpectPunct("{");
    while (!AtPunct("}")) {
      Token field = ExpectIdent("a field");
      if (field.text == "domain") {
        RequireField(kind, field, NodeKind::kUtility,
                     "utility nodes have no declared domain; distinct table "
                     "values define it");
        if (node.has_domain) TextError(field.span, "duplicate 'domain' field");
        ExpectPunct(":");
        node.domain = ParseNameList(false, "domain");
        node.has_domain = true;
        ExpectPunct(";");
      } else if (field.text == "tags") {
        if (kind != NodeKind::kChance) {
          TextError(field.span, "tags apply to chance nodes only");
        }
        if (node.world) TextError(field.span, "duplicate 'tags' field");
        ExpectPunct(":");
        std::vector<Token> tags = ParseNameList(false, "tags");
        for (const Token& t : tags) {
          if (t.text != "world") {
            TextError(t.span, "unknown tag '" + t.text + "'", {"world"});
          }
        }
        node.world = true;
        ExpectPunct(";");
      } else if (field.text == "parents" || field.text == "observes") {
        bool is_observes = field.text == "observes";
        if (is_observes && kind != NodeKind::kDecision) {
          TextError(field.span, std::string(KindName(kind)) +
                                    " nodes take 'parents', not 'observes'");
        }
        if (!is_observes && kind == NodeKind::kDecision) {
          TextError(field.span, "decision nodes take 'observes', not 'parents'");
        }
        if (node.has_parents) {
          TextError(field.span, "duplicate '" + field.text + "' field");
        }
        ExpectPunct(":");
        node.parents = ParseNameList(true, field.text.c_str());
        node.has_parents = true;
        ExpectPunct(";");
      } else if (field.text == "cpt" || field.text == "table") {
        bool is_cpt = field.text == "cpt";
        if (kind == NodeKind::kDecision) {
          TextError(field.span,
                    "decision nodes have no mechanism; policies are supplied "
                    "or solved for");
        }
        if (is_cpt && kind == NodeKind::kUtility) {
          TextError(field.span, "utility nodes use 'table'");
        }
        if (!is_cpt && kind == NodeKind::kChance) {
          TextError(field.span, "chance nodes use 'cpt'");
        }
        if (node.has_mech) {
          TextError(field.span, "duplicate '" + field.text + "' field");
        }
        node.has_mech = true;
        node.mech_span = field.span;
        ParseRows(is_cpt, &node);
      } else {
        TextError(field.span, "unknown field '" + field.text + "'",
                  FieldsFor(kind));
      }
    }
    ExpectPunct("}");
    if (kind != NodeKind::kUtility && !node.has_domain) {
      TextError(node.name.span, std::string(KindName(kind)) + " node '" +
                                    node.name.text + "' needs a domain");
    }
    nodes.push_back(std::move(node));
  }

  void RequireField(NodeKind kind, const Token& field, NodeKind banned,
                    const char* message) {
    if (kind == banned) TextError(field.span, message);
  }

  static std::vector<std::string> FieldsFor(NodeKind kind) {
    switch (kind) {
      case NodeKind::kChance:
        return {"domain", "tags", "parents", "cpt"};
      case NodeKind::kDecision:
        return {"domain", "observes"};
      case NodeKind::kUtility:
        return {"parents", "table"};
    }
    return {};
  }

  void ParseRows(bool is_cpt, RawNode* node) {
    ExpectPunct("{");
    while (!AtPunct("}")) {
      RawRow row;
      row.span = Peek().span;
      ExpectPunct("(");
      if (!AtPunct(")")) {
        while (true) {
          row.key.push_back(ExpectIdent("an outcome or '_'"));
          if (AtPunct(",")) {
            Next();
            continue;
          }
          break;
        }
      }
      ExpectPunct(")");
      ExpectPunct("->");
      if (is_cpt) {
        while (true) {
          Token outcome = ExpectIdent("an outcome");
          if (outcome.text == "_") {
            TextError(outcome.span, "'_' cannot name a distribution entry");
          }
          ExpectPunct(":");
          Token num = ExpectNumber();
          row.dist.emplace_back(outcome, num);
          if (AtPunct(",")) {
            Next();
            continue;
          }
          break;
        }
      } else {
        row.value = ExpectNumber();
      }
      ExpectPunct(";");
      node->rows.push_back(std::move(row));
    }
    ExpectPunct("}");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// --- Shared row expansion -------------------------------------------------

std::string FormatKey(const std::vector<std::string>& labels) {
  std::string out = "(";
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  out += ")";
  return out;
}

std::vector<std::string> ConfigLabels(
    const std::vector<std::vector<std::string>>& pdoms,
    const std::vector<int>& digits) {
  std::vector<std::string> labels;
  labels.reserve(digits.size());
  for (size_t j = 0; j < digits.size(); ++j) {
    labels.push_back(pdoms[j][digits[j]]);
  }
  return labels;
}

// Keys hold outcome indices, -1 for wildcards. Returns, per configuration in
// canonical order, the first matching key's position, or -1 when uncovered.
std::vector<int> MatchConfigs(const std::vector<std::vector<int>>& keys,
                              const ConfigIndexer& idx) {
  std::vector<int> chosen(static_cast<size_t>(idx.count()), -1);
  for (std::int64_t c = 0; c < idx.count(); ++c) {
    std::vector<int> digits = idx.DigitsOf(c);
    for (size_t r = 0; r < keys.size(); ++r) {
      bool match = true;
      for (size_t j = 0; j < digits.size(); ++j) {
        if (keys[r][j] != -1 && keys[r][j] != digits[j]) {
          match = false;
          break;
        }
      }
      if (match) {
        chosen[static_cast<size_t>(c)] = static_cast<int>(r);
        break;
      }
    }
  }
  return chosen;
}

int FindLabel(const std::vector<std::string>& domain, const std::string& s) {
  auto it = std::find(domain.begin(), domain.end(), s);
  return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
}

// --- Analysis: raw declarations to a model --------------------------------

struct ParsedFile {
  CidModel model;
  std::map<std::string, SourceSpan> decl_spans;
};

ParsedFile Analyze(const Parser& p) {
  std::set<std::string> agent_names;
  for (const Token& a : p.agents) {
    if (!agent_names.insert(a.text).second) {
      TextError(a.span, "duplicate agent '" + a.text + "'");
    }
  }
  std::map<std::string, const RawNode*> by_name;
  std::map<std::string, SourceSpan> spans;
  for (const RawNode& n : p.nodes) {
    if (!by_name.emplace(n.name.text, &n).second) {
      TextError(n.name.span, "duplicate node '" + n.name.text + "'");
    }
    spans[n.name.text] = n.name.span;
  }
  // `_cf` is reserved for counterfactual copies; it is only legal when the
  // factual partner is present in the same model.
  for (const RawNode& n : p.nodes) {
    const std::string& name = n.name.text;
    if (name.size() > 3 && name.compare(name.size() - 3, 3, "_cf") == 0 &&
        by_name.count(name.substr(0, name.size() - 3)) == 0) {
      TextError(n.name.span, "node '" + name +
                                 "' uses the reserved '_cf' suffix without a "
                                 "factual partner '" +
                                 name.substr(0, name.size() - 3) + "'");
    }
  }

  CidModelBuilder builder;
  for (const Token& a : p.agents) builder.AddAgent(a.text);

  for (const RawNode& n : p.nodes) {
    if (!n.agent.text.empty() && agent_names.count(n.agent.text) == 0) {
      TextError(n.agent.span, "unknown agent '" + n.agent.text + "'");
    }
    std::set<std::string> seen_outcomes;
    for (const Token& o : n.domain) {
      if (!seen_outcomes.insert(o.text).second) {
        TextError(o.span, "duplicate outcome '" + o.text + "'");
      }
    }
    std::set<std::string> seen_parents;
    for (const Token& par : n.parents) {
      auto it = by_name.find(par.text);
      if (it == by_name.end()) {
        TextError(par.span, "unknown node '" + par.text + "'");
      }
      if (!seen_parents.insert(par.text).second) {
        TextError(par.span, "duplicate parent '" + par.text + "'");
      }
      if (n.kind != NodeKind::kDecision &&
          it->second->kind == NodeKind::kUtility) {
        TextError(par.span, "utility node '" + par.text +
                                "' may only inform decisions");
      }
    }
    std::vector<std::string> domain;
    for (const Token& o : n.domain) domain.push_back(o.text);
    std::vector<std::string> parents;
    for (const Token& par : n.parents) parents.push_back(par.text);
    switch (n.kind) {
      case NodeKind::kChance:
        builder.AddChance(n.name.text, domain, parents, n.world);
        break;
      case NodeKind::kDecision:
        builder.AddDecision(n.name.text, n.agent.text, domain, parents);
        break;
      case NodeKind::kUtility:
        builder.AddUtility(n.name.text, n.agent.text, parents);
        break;
    }
  }

  // Expand mechanism rows now that every parent's domain is known.
  for (const RawNode& n : p.nodes) {
    if (!n.has_mech) continue;
    std::vector<std::vector<std::string>> pdoms;
    std::vector<int> sizes;
    for (const Token& par : n.parents) {
      const RawNode* pn = by_name.at(par.text);
      std::vector<std::string> d;
      for (const Token& o : pn->domain) d.push_back(o.text);
      pdoms.push_back(d);
      sizes.push_back(static_cast<int>(d.size()));
    }
    ConfigIndexer idx(sizes);
    std::vector<std::vector<int>> keys;
    for (const RawRow& row : n.rows) {
      if (row.key.size() != pdoms.size()) {
        std::ostringstream msg;
        msg << "row key has " << row.key.size() << " item"
            << (row.key.size() == 1 ? "" : "s") << "; '" << n.name.text
            << "' has " << pdoms.size() << " parent"
            << (pdoms.size() == 1 ? "" : "s");
        TextError(row.span, msg.str());
      }
      std::vector<int> key;
      for (size_t j = 0; j < row.key.size(); ++j) {
        const Token& item = row.key[j];
        if (item.text == "_") {
          key.push_back(-1);
          continue;
        }
        int o = FindLabel(pdoms[j], item.text);
        if (o < 0) {
          TextError(item.span, "'" + item.text + "' is not an outcome of '" +
                                   n.parents[j].text + "'");
        }
        key.push_back(o);
      }
      keys.push_back(std::move(key));
    }
    std::vector<int> chosen = MatchConfigs(keys, idx);
    for (std::int64_t c = 0; c < idx.count(); ++c) {
      if (chosen[static_cast<size_t>(c)] < 0) {
        TextError(n.mech_span,
                  "no row covers " +
                      FormatKey(ConfigLabels(pdoms, idx.DigitsOf(c))));
      }
    }
    if (n.kind == NodeKind::kChance) {
      std::vector<std::string> domain;
      for (const Token& o : n.domain) domain.push_back(o.text);
      std::vector<std::vector<double>> dense(n.rows.size());
      for (size_t r = 0; r < n.rows.size(); ++r) {
        std::vector<double> row(domain.size(), 0.0);
        std::set<std::string> seen;
        for (const auto& [outcome, num] : n.rows[r].dist) {
          int o = FindLabel(domain, outcome.text);
          if (o < 0) {
            TextError(outcome.span, "'" + outcome.text +
                                        "' is not an outcome of '" +
                                        n.name.text + "'");
          }
          if (!seen.insert(outcome.text).second) {
            TextError(outcome.span,
                      "duplicate entry for outcome '" + outcome.text + "'");
          }
          row[static_cast<size_t>(o)] = num.number;
        }
        dense[r] = std::move(row);
      }
      std::vector<std::vector<double>> rows;
      rows.reserve(static_cast<size_t>(idx.count()));
      for (std::int64_t c = 0; c < idx.count(); ++c) {
        rows.push_back(dense[static_cast<size_t>(chosen[static_cast<size_t>(c)])]);
      }
      builder.SetCpt(n.name.text, std::move(rows));
    } else {
      std::vector<double> values;
      values.reserve(static_cast<size_t>(idx.count()));
      for (std::int64_t c = 0; c < idx.count(); ++c) {
        values.push_back(n.rows[static_cast<size_t>(chosen[static_cast<size_t>(c)])]
                             .value.number);
      }
      builder.SetUtility(n.name.text, std::move(values));
    }
  }

  ParsedFile out;
  try {
    out.model = builder.Build();
  } catch (const CidError& e) {
    throw DslError(ParseIssue{SourceSpan{1, 1, 0}, "", e.what(), {}});
  }
  out.decl_spans = std::move(spans);
  return out;
}

ParsedFile ParseInternal(const std::string& text) {
  Parser parser(Lex(text));
  parser.Run();
  return Analyze(parser);
}

// Strict mode reports the first validation violation at the span (or JSON
// pointer) of the offending declaration.
std::string SubjectHead(const std::string& subject) {
  size_t sp = subject.find(' ');
  return sp == std::string::npos ? subject : subject.substr(0, sp);
}

void GateValidation(const CidModel& model,
                    const std::map<std::string, SourceSpan>& spans) {
  const ValidationReport& report = model.Validation();
  if (report.ok) return;
  const ValidationIssue& v = report.violations.front();
  SourceSpan span{1, 1, 0};
  auto it = spans.find(SubjectHead(v.subject));
  if (it != spans.end()) span = it->second;
  throw DslError(ParseIssue{span, "", v.subject + ": " + v.message, {}});
}

}  // namespace

CidModel ParseModel(const std::string& text) {
  ParsedFile f = ParseInternal(text);
  GateValidation(f.model, f.decl_spans);
  return std::move(f.model);
}

CidModel ParseModelLax(const std::string& text) {
  return ParseInternal(text).model;
}

// --- Serialization --------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> CounterfactualPairs(
    const CidModel& model) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Node& n : model.nodes()) {
    const std::string twin = n.name + "_cf";
    if (model.IndexOf(twin) >= 0) pairs.emplace_back(n.name, twin);
  }
  return pairs;
}

std::string JoinNames(const CidModel& model, const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += model.node(ids[i]).name;
  }
  return out;
}

std::vector<std::vector<std::string>> ParentDomains(const CidModel& model,
                                                    int i) {
  std::vector<std::vector<std::string>> pdoms;
  for (int p : model.node(i).parents) pdoms.push_back(model.node(p).outcomes);
  return pdoms;
}

void WriteMechanism(std::ostringstream& out, const CidModel& model, int i) {
  const Node& n = model.node(i);
  std::vector<std::vector<std::string>> pdoms = ParentDomains(model, i);
  ConfigIndexer idx = model.ParentIndexer(i);
  const char* keyword = n.kind == NodeKind::kChance ? "cpt" : "table";
  out << "  " << keyword << " {\n";
  for (std::int64_t c = 0; c < idx.count(); ++c) {
    out << "    " << FormatKey(ConfigLabels(pdoms, idx.DigitsOf(c))) << " -> ";
    if (n.kind == NodeKind::kChance) {
      const std::vector<double>& row =
          model.cpt(i)->rows[static_cast<size_t>(c)];
      bool first = true;
      for (size_t o = 0; o < row.size(); ++o) {
        if (row[o] == 0.0) continue;
        if (!first) out << ", ";
        out << n.outcomes[o] << ": " << FormatNumber(row[o]);
        first = false;
      }
      if (first) out << n.outcomes[0] << ": 0";
    } else {
      out << FormatNumber(model.utility(i)->values[static_cast<size_t>(c)]);
    }
    out << ";\n";
  }
  out << "  }\n";
}

}  // namespace

std::string SerializeModel(const CidModel& model) {
  if (model.agents().empty() && model.num_nodes() == 0) return "";
  std::ostringstream out;
  bool wrote_block = false;
  std::vector<std::pair<std::string, std::string>> pairs =
      CounterfactualPairs(model);
  if (!pairs.empty()) {
    out << "# counterfactual pairs: ";
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (i) out << ", ";
      out << pairs[i].first << " ~ " << pairs[i].second;
    }
    out << "\n";
    wrote_block = true;
  }
  if (!model.agents().empty()) {
    if (wrote_block) out << "\n";
    for (const std::string& a : model.agents()) out << "agent " << a << ";\n";
    wrote_block = true;
  }
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& n = model.node(i);
    if (wrote_block) out << "\n";
    wrote_block = true;
    switch (n.kind) {
      case NodeKind::kChance: {
        out << "chance " << n.name << " {\n";
        out << "  domain: [";
        for (size_t o = 0; o < n.outcomes.size(); ++o) {
          if (o) out << ", ";
          out << n.outcomes[o];
        }
        out << "];\n";
        if (n.world) out << "  tags: [world];\n";
        if (!n.parents.empty()) {
          out << "  parents: [" << JoinNames(model, n.parents) << "];\n";
        }
        if (model.cpt(i) != nullptr) WriteMechanism(out, model, i);
        out << "}\n";
        break;
      }
      case NodeKind::kDecision: {
        out << "decision " << n.name << " of " << n.agent << " {\n";
        out << "  domain: [";
        for (size_t o = 0; o < n.outcomes.size(); ++o) {
          if (o) out << ", ";
          out << n.outcomes[o];
        }
        out << "];\n";
        if (!n.parents.empty()) {
          out << "  observes: [" << JoinNames(model, n.parents) << "];\n";
        }
        out << "}\n";
        break;
      }
      case NodeKind::kUtility: {
        out << "utility " << n.name << " of " << n.agent << " {\n";
        if (!n.parents.empty()) {
          out << "  parents: [" << JoinNames(model, n.parents) << "];\n";
        }
        if (model.utility(i) != nullptr) WriteMechanism(out, model, i);
        out << "}\n";
        break;
      }
    }
  }
  return out.str();
}

// --- JSON mirror ------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void JsonError(const std::string& pointer,
                            const std::string& message) {
  throw DslError(ParseIssue{SourceSpan{}, pointer, message, {}});
}

const json& Require(const json& obj, const std::string& pointer,
                    const char* key, json::value_t type,
                    const char* type_name) {
  if (!obj.contains(key)) {
    JsonError(pointer, std::string("missing key '") + key + "'");
  }
  const json& v = obj.at(key);
  bool ok = v.type() == type ||
            (type == json::value_t::number_float && v.is_number());
  if (!ok) {
    JsonError(pointer + "/" + key, std::string("expected ") + type_name);
  }
  return v;
}

std::vector<std::string> StringList(const json& arr,
                                    const std::string& pointer) {
  std::vector<std::string> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      JsonError(pointer + "/" + std::to_string(i), "expected a string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

void CheckKeys(const json& obj, const std::string& pointer,
               const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.count(it.key()) == 0) {
      JsonError(pointer, "unknown key '" + it.key() + "'");
    }
  }
}

struct JsonNode {
  NodeKind kind;
  std::string name;
  std::string pointer;
  std::vector<std::string> domain;
  std::vector<std::string> parents;
};

CidModel FromJsonInternal(const json& doc,
                          std::map<std::string, std::string>* pointers) {
  if (!doc.is_object()) JsonError("/", "expected an object");
  CheckKeys(doc, "/", {"agents", "nodes", "mechanisms", "meta"});
  CidModelBuilder builder;
  if (doc.contains("agents")) {
    const json& agents = doc.at("agents");
    if (!agents.is_array()) JsonError("/agents", "expected an array");
    for (const std::string& a : StringList(agents, "/agents")) {
      builder.AddAgent(a);
    }
  }

  std::map<std::string, JsonNode> by_name;
  if (doc.contains("nodes")) {
    const json& nodes = doc.at("nodes");
    if (!nodes.is_array()) JsonError("/nodes", "expected an array");
    for (size_t i = 0; i < nodes.size(); ++i) {
      std::string ptr = "/nodes/" + std::to_string(i);
      const json& nd = nodes[i];
      if (!nd.is_object()) JsonError(ptr, "expected an object");
      CheckKeys(nd, ptr, {"name", "kind", "agent", "domain", "parents", "tags"});
      JsonNode jn;
      jn.pointer = ptr;
      jn.name = Require(nd, ptr, "name", json::value_t::string, "a string")
                    .get<std::string>();
      std::string kind =
          Require(nd, ptr, "kind", json::value_t::string, "a string")
              .get<std::string>();
      if (kind == "chance") {
        jn.kind = NodeKind::kChance;
      } else if (kind == "decision") {
        jn.kind = NodeKind::kDecision;
      } else if (kind == "utility") {
        jn.kind = NodeKind::kUtility;
      } else {
        JsonError(ptr + "/kind", "unknown kind '" + kind + "'");
      }
      std::string agent;
      if (nd.contains("agent")) {
        if (!nd.at("agent").is_string()) {
          JsonError(ptr + "/agent", "expected a string");
        }
        agent = nd.at("agent").get<std::string>();
      }
      if (jn.kind == NodeKind::kChance && !agent.empty()) {
        JsonError(ptr + "/agent", "chance nodes have no owner");
      }
      if (jn.kind != NodeKind::kChance && agent.empty()) {
        JsonError(ptr, "missing key 'agent'");
      }
      if (nd.contains("domain")) {
        if (!nd.at("domain").is_array()) {
          JsonError(ptr + "/domain", "expected an array");
        }
        jn.domain = StringList(nd.at("domain"), ptr + "/domain");
      }
      if (jn.kind != NodeKind::kUtility && jn.domain.empty()) {
        JsonError(ptr, "missing key 'domain'");
      }
      if (nd.contains("parents")) {
        if (!nd.at("parents").is_array()) {
          JsonError(ptr + "/parents", "expected an array");
        }
        jn.parents = StringList(nd.at("parents"), ptr + "/parents");
      }
      bool world = false;
      if (nd.contains("tags")) {
        if (!nd.at("tags").is_array()) {
          JsonError(ptr + "/tags", "expected an array");
        }
        if (jn.kind != NodeKind::kChance) {
          JsonError(ptr + "/tags", "tags apply to chance nodes only");
        }
        for (const std::string& t : StringList(nd.at("tags"), ptr + "/tags")) {
          if (t != "world") {
            JsonError(ptr + "/tags", "unknown tag '" + t + "'");
          }
          world = true;
        }
      }
      switch (jn.kind) {
        case NodeKind::kChance:
          builder.AddChance(jn.name, jn.domain, jn.parents, world);
          break;
        case NodeKind::kDecision:
          builder.AddDecision(jn.name, agent, jn.domain, jn.parents);
          break;
        case NodeKind::kUtility:
          builder.AddUtility(jn.name, agent, jn.parents);
          break;
      }
      if (by_name.count(jn.name) > 0) {
        JsonError(ptr + "/name", "duplicate node '" + jn.name + "'");
      }
      if (pointers) (*pointers)[jn.name] = ptr;
      by_name[jn.name] = jn;
    }
  }
  for (const auto& [name, jn] : by_name) {
    if (name.size() > 3 && name.compare(name.size() - 3, 3, "_cf") == 0 &&
        by_name.count(name.substr(0, name.size() - 3)) == 0) {
      JsonError("/nodes", "node '" + name +
                              "' uses the reserved '_cf' suffix without a "
                              "factual partner '" +
                              name.substr(0, name.size() - 3) + "'");
    }
  }

  if (doc.contains("mechanisms")) {
    const json& mechs = doc.at("mechanisms");
    if (!mechs.is_object()) JsonError("/mechanisms", "expected an object");
    for (auto it = mechs.begin(); it != mechs.end(); ++it) {
      std::string ptr = "/mechanisms/" + it.key();
      auto found = by_name.find(it.key());
      if (found == by_name.end()) {
        JsonError(ptr, "unknown node '" + it.key() + "'");
      }
      const JsonNode& jn = found->second;
      if (jn.kind == NodeKind::kDecision) {
        JsonError(ptr, "decision nodes have no mechanism");
      }
      if (!it.value().is_object()) JsonError(ptr, "expected an object");
      CheckKeys(it.value(), ptr, {"rows"});
      const json& rows =
          Require(it.value(), ptr, "rows", json::value_t::array, "an array");

      std::vector<std::vector<std::string>> pdoms;
      std::vector<int> sizes;
      bool resolvable = true;
      for (const std::string& par : jn.parents) {
        auto pit = by_name.find(par);
        if (pit == by_name.end() || pit->second.kind == NodeKind::kUtility) {
          resolvable = false;
          break;
        }
        pdoms.push_back(pit->second.domain);
        sizes.push_back(static_cast<int>(pit->second.domain.size()));
      }
      if (!resolvable) {
        JsonError(ptr, "mechanism parents must be declared non-utility nodes");
      }
      ConfigIndexer idx(sizes);
      std::vector<std::vector<int>> keys;
      std::vector<std::vector<double>> dense_rows;
      std::vector<double> dense_values;
      for (size_t r = 0; r < rows.size(); ++r) {
        std::string rptr = ptr + "/rows/" + std::to_string(r);
        const json& row = rows[r];
        if (!row.is_object()) JsonError(rptr, "expected an object");
        if (jn.kind == NodeKind::kChance) {
          CheckKeys(row, rptr, {"when", "dist"});
        } else {
          CheckKeys(row, rptr, {"when", "value"});
        }
        const json& when =
            Require(row, rptr, "when", json::value_t::array, "an array");
        std::vector<std::string> items = StringList(when, rptr + "/when");
        if (items.size() != pdoms.size()) {
          JsonError(rptr + "/when", "expected " + std::to_string(pdoms.size()) +
                                        " items");
        }
        std::vector<int> key;
        for (size_t j = 0; j < items.size(); ++j) {
          if (items[j] == "_") {
            key.push_back(-1);
            continue;
          }
          int o = FindLabel(pdoms[j], items[j]);
          if (o < 0) {
            JsonError(rptr + "/when/" + std::to_string(j),
                      "'" + items[j] + "' is not an outcome of '" +
                          jn.parents[j] + "'");
          }
          key.push_back(o);
        }
        keys.push_back(std::move(key));
        if (jn.kind == NodeKind::kChance) {
          const json& dist =
              Require(row, rptr, "dist", json::value_t::object, "an object");
          std::vector<double> dense(jn.domain.size(), 0.0);
          for (auto dit = dist.begin(); dit != dist.end(); ++dit) {
            int o = FindLabel(jn.domain, dit.key());
            if (o < 0) {
              JsonError(rptr + "/dist",
                        "'" + dit.key() + "' is not an outcome of '" +
                            jn.name + "'");
            }
            if (!dit.value().is_number()) {
              JsonError(rptr + "/dist/" + dit.key(), "expected a number");
            }
            dense[static_cast<size_t>(o)] = dit.value().get<double>();
          }
          dense_rows.push_back(std::move(dense));
        } else {
          const json& value = Require(row, rptr, "value",
                                      json::value_t::number_float, "a number");
          dense_values.push_back(value.get<double>());
        }
      }
      std::vector<int> chosen = MatchConfigs(keys, idx);
      for (std::int64_t c = 0; c < idx.count(); ++c) {
        if (chosen[static_cast<size_t>(c)] < 0) {
          JsonError(ptr, "no row covers " +
                             FormatKey(ConfigLabels(pdoms, idx.DigitsOf(c))));
        }
      }
      if (jn.kind == NodeKind::kChance) {
        std::vector<std::vector<double>> expanded;
        expanded.reserve(static_cast<size_t>(idx.count()));
        for (std::int64_t c = 0; c < idx.count(); ++c) {
          expanded.push_back(
              dense_rows[static_cast<size_t>(chosen[static_cast<size_t>(c)])]);
        }
        builder.SetCpt(jn.name, std::move(expanded));
      } else {
        std::vector<double> expanded;
        expanded.reserve(static_cast<size_t>(idx.count()));
        for (std::int64_t c = 0; c < idx.count(); ++c) {
          expanded.push_back(
              dense_values[static_cast<size_t>(chosen[static_cast<size_t>(c)])]);
        }
        builder.SetUtility(jn.name, std::move(expanded));
      }
    }
  }

  try {
    return builder.Build();
  } catch (const CidError& e) {
    throw DslError(ParseIssue{SourceSpan{}, "/", e.what(), {}});
  }
}

}  // namespace

nlohmann::json ModelToJson(const CidModel& model) {
  json doc = json::object();
  doc["agents"] = model.agents();
  json nodes = json::array();
  json mechs = json::object();
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& n = model.node(i);
    json nd = json::object();
    nd["name"] = n.name;
    nd["kind"] = KindName(n.kind);
    if (!n.agent.empty()) nd["agent"] = n.agent;
    nd["domain"] = n.outcomes;
    json parents = json::array();
    for (int p : n.parents) parents.push_back(model.node(p).name);
    nd["parents"] = parents;
    if (n.world) nd["tags"] = json::array({"world"});
    nodes.push_back(nd);

    if (n.kind == NodeKind::kDecision) continue;
    bool has_mech = n.kind == NodeKind::kChance ? model.cpt(i) != nullptr
                                                : model.utility(i) != nullptr;
    if (!has_mech) continue;
    std::vector<std::vector<std::string>> pdoms = ParentDomains(model, i);
    ConfigIndexer idx = model.ParentIndexer(i);
    json rows = json::array();
    for (std::int64_t c = 0; c < idx.count(); ++c) {
      json row = json::object();
      row["when"] = ConfigLabels(pdoms, idx.DigitsOf(c));
      if (n.kind == NodeKind::kChance) {
        const std::vector<double>& dense =
            model.cpt(i)->rows[static_cast<size_t>(c)];
        json dist = json::object();
        for (size_t o = 0; o < dense.size(); ++o) {
          if (dense[o] != 0.0) dist[n.outcomes[o]] = dense[o];
        }
        row["dist"] = dist;
      } else {
        row["value"] = model.utility(i)->values[static_cast<size_t>(c)];
      }
      rows.push_back(row);
    }
    mechs[n.name] = json::object({{"rows", rows}});
  }
  doc["nodes"] = nodes;
  doc["mechanisms"] = mechs;
  std::vector<std::pair<std::string, std::string>> pairs =
      CounterfactualPairs(model);
  if (!pairs.empty()) {
    json list = json::array();
    for (const auto& [base, twin] : pairs) {
      list.push_back(json::array({base, twin}));
    }
    doc["meta"] = json::object({{"counterfactual_pairs", list}});
  }
  return doc;
}

CidModel ModelFromJson(const nlohmann::json& doc) {
  std::map<std::string, std::string> pointers;
  CidModel model = FromJsonInternal(doc, &pointers);
  const ValidationReport& report = model.Validation();
  if (!report.ok) {
    const ValidationIssue& v = report.violations.front();
    std::string head = SubjectHead(v.subject);
    auto it = pointers.find(head);
    JsonError(it != pointers.end() ? it->second : "/",
              v.subject + ": " + v.message);
  }
  return model;
}

CidModel ModelFromJsonLax(const nlohmann::json& doc) {
  return FromJsonInternal(doc, nullptr);
}

nlohmann::json ValidationToJson(const ValidationReport& report) {
  json doc = json::object();
  doc["ok"] = report.ok;
  auto issues = [](const std::vector<ValidationIssue>& list) {
    json arr = json::array();
    for (const ValidationIssue& issue : list) {
      arr.push_back(json::object(
          {{"subject", issue.subject}, {"message", issue.message}}));
    }
    return arr;
  };
  doc["violations"] = issues(report.violations);
  doc["warnings"] = issues(report.warnings);
  return doc;
}

// --- Policy exchange --------------------------------------------------------

nlohmann::json PolicyToJson(const CidModel& model,
                            const PolicyProfile& profile) {
  json doc = json::object();
  for (const auto& [name, rule] : profile.rules) {
    int d = model.RequireNode(name);
    const Node& node = model.node(d);
    std::vector<std::vector<std::string>> pdoms = ParentDomains(model, d);
    ConfigIndexer idx = model.ParentIndexer(d);
    json rows = json::array();
    for (std::int64_t c = 0; c < idx.count(); ++c) {
      const std::vector<double>& dist = rule.rows[static_cast<size_t>(c)];
      json row = json::object();
      row["when"] = ConfigLabels(pdoms, idx.DigitsOf(c));
      int pure = -1;
      int support = 0;
      for (size_t a = 0; a < dist.size(); ++a) {
        if (dist[a] != 0.0) {
          ++support;
          pure = static_cast<int>(a);
        }
      }
      if (support == 1 && std::abs(dist[static_cast<size_t>(pure)] - 1.0) <=
                              kTolerance) {
        row["do"] = node.outcomes[static_cast<size_t>(pure)];
      } else {
        json weights = json::object();
        for (size_t a = 0; a < dist.size(); ++a) {
          if (dist[a] != 0.0) weights[node.outcomes[a]] = dist[a];
        }
        row["do"] = json::object({{"dist", weights}});
      }
      rows.push_back(row);
    }
    doc[name] = rows;
  }
  return doc;
}

PolicyProfile PolicyFromJson(const CidModel& model, const nlohmann::json& doc) {
  if (!doc.is_object()) {
    Fail(ErrorCode::kParse, "policy document must be an object");
  }
  PolicyProfile profile;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& name = it.key();
    int d = model.RequireNode(name);
    if (model.node(d).kind != NodeKind::kDecision) {
      Fail(ErrorCode::kUsage, "'" + name + "' is not a decision node");
    }
    const Node& node = model.node(d);
    std::vector<std::vector<std::string>> pdoms = ParentDomains(model, d);
    ConfigIndexer idx = model.ParentIndexer(d);
    if (!it.value().is_array()) {
      Fail(ErrorCode::kParse, "policy for '" + name + "' must be an array");
    }
    std::vector<std::vector<int>> keys;
    std::vector<std::vector<double>> dists;
    for (const json& row : it.value()) {
      if (!row.is_object() || !row.contains("when") || !row.contains("do")) {
        Fail(ErrorCode::kParse,
             "policy rows for '" + name + "' need 'when' and 'do'");
      }
      const json& when = row.at("when");
      if (!when.is_array() || when.size() != pdoms.size()) {
        Fail(ErrorCode::kUsage, "policy row key for '" + name + "' needs " +
                                    std::to_string(pdoms.size()) + " items");
      }
      std::vector<int> key;
      for (size_t j = 0; j < pdoms.size(); ++j) {
        if (!when[j].is_string()) {
          Fail(ErrorCode::kParse, "policy row keys must be strings");
        }
        std::string item = when[j].get<std::string>();
        if (item == "_") {
          key.push_back(-1);
          continue;
        }
        int o = FindLabel(pdoms[j], item);
        if (o < 0) {
          Fail(ErrorCode::kUsage,
               "'" + item + "' is not an outcome of '" +
                   model.node(node.parents[j]).name + "'");
        }
        key.push_back(o);
      }
      keys.push_back(std::move(key));
      std::vector<double> dist(node.outcomes.size(), 0.0);
      const json& act = row.at("do");
      if (act.is_string()) {
        int a = FindLabel(node.outcomes, act.get<std::string>());
        if (a < 0) {
          Fail(ErrorCode::kUsage, "'" + act.get<std::string>() +
                                      "' is not an action of '" + name + "'");
        }
        dist[static_cast<size_t>(a)] = 1.0;
      } else if (act.is_object() && act.contains("dist") &&
                 act.at("dist").is_object()) {
        double total = 0.0;
        for (auto dit = act.at("dist").begin(); dit != act.at("dist").end();
             ++dit) {
          int a = FindLabel(node.outcomes, dit.key());
          if (a < 0) {
            Fail(ErrorCode::kUsage,
                 "'" + dit.key() + "' is not an action of '" + name + "'");
          }
          if (!dit.value().is_number()) {
            Fail(ErrorCode::kParse, "action weights must be numbers");
          }
          double w = dit.value().get<double>();
          if (w < -kTolerance) {
            Fail(ErrorCode::kUsage, "action weights must be non-negative");
          }
          dist[static_cast<size_t>(a)] = w;
          total += w;
        }
        if (std::abs(total - 1.0) > kTolerance) {
          Fail(ErrorCode::kUsage, "action weights for '" + name +
                                      "' must sum to 1 (got " +
                                      FormatNumber(total) + ")");
        }
      } else {
        Fail(ErrorCode::kParse,
             "'do' must be an action name or {\"dist\": {...}}");
      }
      dists.push_back(std::move(dist));
    }
    std::vector<int> chosen = MatchConfigs(keys, idx);
    DecisionRule rule;
    rule.rows.reserve(static_cast<size_t>(idx.count()));
    for (std::int64_t c = 0; c < idx.count(); ++c) {
      int r = chosen[static_cast<size_t>(c)];
      if (r < 0) {
        Fail(ErrorCode::kUsage,
             "policy for '" + name + "' does not cover " +
                 FormatKey(ConfigLabels(pdoms, idx.DigitsOf(c))));
      }
      rule.rows.push_back(dists[static_cast<size_t>(r)]);
    }
    profile.rules[name] = std::move(rule);
  }
  return profile;
}

}  // namespace cid
