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

#ifndef MTSA_CONLL_H_
#define MTSA_CONLL_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mtsa/tagging.h"

namespace mtsa {

// Two-column CoNLL-style text: "token<TAB>tag" per line, a blank line
// between sentences, and lines starting with "# " ignored. Lines without
// exactly two tab-separated fields raise ParseError with the line number;
// a file without any sentence raises DataError.
std::vector<Sentence> ReadConll(const std::string& path);
std::vector<Sentence> ParseConll(std::istream& in,
                                 const std::string& source = "");

// Writes sentences with their tags. Output ends with a newline.
void WriteConll(const std::string& path, const std::vector<Sentence>& sentences);
void FormatConll(std::ostream& out, const std::vector<Sentence>& sentences);

// Span-annotated JSON lines, one sentence per line:
//   {"tokens": ["the", "sushi"], "spans": [[1, 2, "POS"]]}
// This is the input of the `convert` command.
std::vector<Sentence> ReadSpanJsonl(const std::string& path);

}  // namespace mtsa

#endif  // MTSA_CONLL_H_
