// Copyright 2026 The p4mc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <limits>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "p4mc/frontend.h"

namespace p4mc {

namespace {

using Kind = Token::Kind;

const absl::flat_hash_map<absl::string_view, Kind>& Keywords() {
  static const auto* keywords = new absl::flat_hash_map<absl::string_view, Kind>{
      {"header", Kind::kHeader},   {"fields", Kind::kFields},
      {"parser", Kind::kParser},   {"switch", Kind::kSwitch},
      {"case", Kind::kCase},       {"default", Kind::kDefault},
      {"stop", Kind::kStop},       {"table", Kind::kTable},
      {"reads", Kind::kReads},     {"actions", Kind::kActions},
      {"max_size", Kind::kMaxSize}, {"action", Kind::kAction},
      {"control", Kind::kControl}, {"if", Kind::kIf},
      {"else", Kind::kElse},       {"exact", Kind::kExact},
      {"ternary", Kind::kTernary}, {"valid", Kind::kValid},
      {"lpm", Kind::kLpm},
  };
  return *keywords;
}

absl::Status LexError(Span span, std::string message) {
  return DiagnosticsError("LexError",
                          {Diagnostic{span, Severity::kError,
                                      std::move(message)}});
}

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

absl::string_view TokenKindName(Token::Kind kind) {
  switch (kind) {
    case Kind::kIdent: return "identifier";
    case Kind::kInt: return "integer";
    case Kind::kLBrace: return "'{'";
    case Kind::kRBrace: return "'}'";
    case Kind::kLParen: return "'('";
    case Kind::kRParen: return "')'";
    case Kind::kColon: return "':'";
    case Kind::kSemi: return "';'";
    case Kind::kComma: return "','";
    case Kind::kDot: return "'.'";
    case Kind::kBang: return "'!'";
    case Kind::kMinus: return "'-'";
    case Kind::kEqEq: return "'=='";
    case Kind::kAndAnd: return "'&&'";
    case Kind::kOrOr: return "'||'";
    case Kind::kHeader: return "'header'";
    case Kind::kFields: return "'fields'";
    case Kind::kParser: return "'parser'";
    case Kind::kSwitch: return "'switch'";
    case Kind::kCase: return "'case'";
    case Kind::kDefault: return "'default'";
    case Kind::kStop: return "'stop'";
    case Kind::kTable: return "'table'";
    case Kind::kReads: return "'reads'";
    case Kind::kActions: return "'actions'";
    case Kind::kMaxSize: return "'max_size'";
    case Kind::kAction: return "'action'";
    case Kind::kControl: return "'control'";
    case Kind::kIf: return "'if'";
    case Kind::kElse: return "'else'";
    case Kind::kExact: return "'exact'";
    case Kind::kTernary: return "'ternary'";
    case Kind::kValid: return "'valid'";
    case Kind::kLpm: return "'lpm'";
    case Kind::kEnd: return "end of input";
  }
  return "?";
}

absl::StatusOr<std::vector<Token>> Tokenize(const SourceProgram& source) {
  const std::string& text = source.text;
  std::vector<Token> tokens;
  size_t pos = 0;
  int line = 1;
  int column = 1;

  auto advance = [&](size_t n) {
    for (size_t i = 0; i < n && pos < text.size(); ++i, ++pos) {
      if (text[pos] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
      while (pos < text.size() && text[pos] != '\n') advance(1);
      continue;
    }

    Token token;
    token.span = Span{line, column};
    const size_t start = pos;

    if (IsIdentStart(c)) {
      size_t end = pos;
      while (end < text.size() && IsIdentChar(text[end])) ++end;
      token.text = text.substr(start, end - start);
      auto it = Keywords().find(token.text);
      token.kind = it == Keywords().end() ? Kind::kIdent : it->second;
      advance(end - start);
      tokens.push_back(std::move(token));
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t end = pos;
      int base = 10;
      if (c == '0' && end + 1 < text.size() &&
          (text[end + 1] == 'x' || text[end + 1] == 'X')) {
        base = 16;
        end += 2;
      }
      const size_t digits_start = end;
      while (end < text.size() && IsIdentChar(text[end])) ++end;
      token.text = text.substr(start, end - start);
      if (end == digits_start) {
        return LexError(token.span,
                        absl::StrCat("malformed integer '", token.text, "'"));
      }
      uint64_t value = 0;
      for (size_t i = digits_start; i < end; ++i) {
        const char d = text[i];
        int digit;
        if (std::isdigit(static_cast<unsigned char>(d))) {
          digit = d - '0';
        } else if (base == 16 && std::isxdigit(static_cast<unsigned char>(d))) {
          digit = std::tolower(static_cast<unsigned char>(d)) - 'a' + 10;
        } else {
          return LexError(token.span, absl::StrCat("malformed integer '",
                                                   token.text, "'"));
        }
        if (value > (std::numeric_limits<uint64_t>::max() - digit) / base) {
          return LexError(token.span,
                          absl::StrCat("integer literal '", token.text,
                                       "' does not fit in 64 bits"));
        }
        value = value * base + digit;
      }
      token.kind = Kind::kInt;
      token.value = value;
      advance(end - start);
      tokens.push_back(std::move(token));
      continue;
    }

    auto two = [&](char a, char b) {
      return c == a && pos + 1 < text.size() && text[pos + 1] == b;
    };
    size_t length = 1;
    if (two('=', '=')) {
      token.kind = Kind::kEqEq;
      length = 2;
    } else if (two('&', '&')) {
      token.kind = Kind::kAndAnd;
      length = 2;
    } else if (two('|', '|')) {
      token.kind = Kind::kOrOr;
      length = 2;
    } else {
      switch (c) {
        case '{': token.kind = Kind::kLBrace; break;
        case '}': token.kind = Kind::kRBrace; break;
        case '(': token.kind = Kind::kLParen; break;
        case ')': token.kind = Kind::kRParen; break;
        case ':': token.kind = Kind::kColon; break;
        case ';': token.kind = Kind::kSemi; break;
        case ',': token.kind = Kind::kComma; break;
        case '.': token.kind = Kind::kDot; break;
        case '!': token.kind = Kind::kBang; break;
        case '-': token.kind = Kind::kMinus; break;
        default: {
          std::string shown = std::isprint(static_cast<unsigned char>(c))
                                  ? std::string(1, c)
                                  : absl::StrCat("\\x", static_cast<int>(
                                        static_cast<unsigned char>(c)));
          return LexError(token.span,
                          absl::StrCat("unexpected character '", shown, "'"));
        }
      }
    }
    token.text = text.substr(start, length);
    advance(length);
    tokens.push_back(std::move(token));
  }

  Token end;
  end.kind = Kind::kEnd;
  end.span = Span{line, column};
  tokens.push_back(end);
  return tokens;
}

}  // namespace p4mc
