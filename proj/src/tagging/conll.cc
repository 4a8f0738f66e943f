// Copyright 2026 The mtsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtsa/conll.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtsa/errors.h"

namespace mtsa {
namespace {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::vector<Sentence> ParseConll(std::istream& in, const std::string& source) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) continue;
    if (line.empty()) {
      if (!current.tokens.empty()) sentences.push_back(std::move(current));
      current = Sentence();
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("expected exactly 2 tab-separated fields", line_no,
                         source);
    }
    std::string token = line.substr(0, tab);
    std::string tag = line.substr(tab + 1);
    if (token.empty() || tag.empty()) {
      throw ParseError("empty token or tag field", line_no, source);
    }
    current.tokens.push_back(std::move(token));
    current.tags.push_back(std::move(tag));
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  if (sentences.empty()) {
    throw DataError((source.empty() ? "" : source + ": ") +
                    "CoNLL input contains no sentences");
  }
  return sentences;
}

std::vector<Sentence> ReadConll(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseConll(in, path);
}

void FormatConll(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Sentence& sent = sentences[s];
    if (sent.tags.size() != sent.tokens.size()) {
      throw DataError("sentence " + std::to_string(s) +
                      ": tag count does not match token count");
    }
    if (s > 0) out << '\n';
    for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
      out << sent.tokens[i] << '\t' << sent.tags[i] << '\n';
    }
  }
}

void WriteConll(const std::string& path,
                const std::vector<Sentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  FormatConll(out, sentences);
}

std::vector<Sentence> ReadSpanJsonl(const std::string& path) {
  std::ifstream in = OpenInput(path);
  std::vector<Sentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    Sentence sent;
    try {
      const auto j = nlohmann::json::parse(line);
      sent.tokens = j.at("tokens").get<std::vector<std::string>>();
      if (j.contains("spans")) {
        for (const auto& s : j.at("spans")) {
          if (!s.is_array() || s.size() != 3) {
            throw ParseError("span must be [start, end, label]", line_no, path);
          }
          sent.spans.push_back({s[0].get<std::size_t>(),
                                s[1].get<std::size_t>(),
                                s[2].get<std::string>()});
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no, path);
    }
    if (sent.tokens.empty()) throw ParseError("sentence has no tokens", line_no, path);
    sentences.push_back(std::move(sent));
  }
  if (sentences.empty()) throw DataError(path + ": no sentences");
  return sentences;
}

}  // namespace mtsa
