// Copyright 2026 The Phrasekit Authors.
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

#include "phrasekit/evaluation.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "phrasekit/model_io.h"

namespace phrasekit {

std::size_t EvalPool::positives() const {
  return static_cast<std::size_t>(
      std::count_if(labeled.begin(), labeled.end(), [](const auto &kv) { return kv.second; }));
}

void EvalPool::add(std::string_view phrase, bool quality) {
  auto [it, inserted] = labeled.emplace(normalize_phrase(phrase), quality);
  if (!inserted) throw DataError("duplicate pool phrase: " + it->first);
}

EvalPool read_pool(std::istream &in, const std::string &name) {
  EvalPool pool;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab != 1 || (line[0] != '0' && line[0] != '1')) {
      throw ParseError(name, line_no, "expected 1|0<TAB>phrase");
    }
    std::string_view phrase = std::string_view(line).substr(2);
    if (normalize_phrase(phrase).empty()) throw ParseError(name, line_no, "empty phrase");
    try {
      pool.add(phrase, line[0] == '1');
    } catch (const DataError &e) {
      throw ParseError(name, line_no, e.what());
    }
  }
  return pool;
}

EvalPool load_pool(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pool file: " + path);
  return read_pool(in, path);
}

PrCurve pr_curve(const RankedPhraseList &ranked, const EvalPool &pool) {
  const std::size_t total_pos = pool.positives();
  if (total_pos == 0) throw DataError("evaluation pool has no quality phrase");
  PrCurve curve;
  std::unordered_set<std::string> seen;
  std::size_t members = 0, tp = 0;
  for (const auto &e : ranked.entries) {
    auto it = pool.labeled.find(e.phrase);
    if (it == pool.labeled.end() || !seen.insert(e.phrase).second) continue;
    ++members;
    if (!it->second) continue;
    ++tp;
    curve.points.emplace_back(double(tp) / double(total_pos), double(tp) / double(members));
  }
  if (members == 0) throw DataError("no pool phrase appears in the ranking");
  if (curve.points.empty()) throw DataError("no quality pool phrase appears in the ranking");

  double prev_r = 0.0, prev_p = curve.points.front().second;
  for (auto [r, p] : curve.points) {
    curve.auc += (r - prev_r) * (p + prev_p) / 2.0;
    prev_r = r;
    prev_p = p;
  }
  return curve;
}

double recall_at(const RankedPhraseList &ranked, const EvalPool &pool, double threshold) {
  const std::size_t total_pos = pool.positives();
  if (total_pos == 0) throw DataError("evaluation pool has no quality phrase");
  std::unordered_set<std::string> hit;
  for (const auto &e : ranked.entries) {
    if (e.quality < threshold) continue;
    auto it = pool.labeled.find(e.phrase);
    if (it != pool.labeled.end() && it->second) hit.insert(e.phrase);
  }
  return double(hit.size()) / double(total_pos);
}

void write_curve(std::ostream &out, const PrCurve &curve) {
  for (auto [r, p] : curve.points) out << format_double(r) << '\t' << format_double(p) << '\n';
  out << "AUC=" << format_double(curve.auc) << '\n';
}

}  // namespace phrasekit
