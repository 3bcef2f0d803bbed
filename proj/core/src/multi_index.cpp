// Copyright 2026 The qprojfilter Authors
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

#include "qpf/multi_index.hpp"

#include <algorithm>
#include <cctype>

#include "qpf/error.hpp"

namespace qpf {

MultiIndex::MultiIndex(std::initializer_list<int> entries) {
  entries_.reserve(entries.size());
  for (int e : entries) {
    if (e != 0 && e != 1) {
      throw Error(ErrorCode::InvariantViolation, "multi-index entries must be 0 or 1", e);
    }
    entries_.push_back(static_cast<std::uint8_t>(e));
  }
}

MultiIndex::MultiIndex(std::vector<std::uint8_t> entries) : entries_(std::move(entries)) {
  for (auto e : entries_) {
    if (e > 1) {
      throw Error(ErrorCode::InvariantViolation, "multi-index entries must be 0 or 1", e);
    }
  }
}

int MultiIndex::zeros() const noexcept {
  return static_cast<int>(std::count(entries_.begin(), entries_.end(), 0));
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i != 0) out += ',';
    out += static_cast<char>('0' + entries_[i]);
  }
  out += ')';
  return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = entries_.size() <=> other.entries_.size(); c != 0) return c;
  return entries_ <=> other.entries_;
}

MultiIndex remove_first(const MultiIndex& alpha) {
  if (alpha.empty()) throw Error(ErrorCode::EmptyIndex, "remove_first of ()");
  return MultiIndex(std::vector<std::uint8_t>(alpha.entries().begin() + 1,
                                              alpha.entries().end()));
}

MultiIndex remove_last(const MultiIndex& alpha) {
  if (alpha.empty()) throw Error(ErrorCode::EmptyIndex, "remove_last of ()");
  return MultiIndex(std::vector<std::uint8_t>(alpha.entries().begin(),
                                              alpha.entries().end() - 1));
}

MultiIndex concat(const MultiIndex& alpha, const MultiIndex& beta) {
  std::vector<std::uint8_t> joined = alpha.entries();
  joined.insert(joined.end(), beta.entries().begin(), beta.entries().end());
  return MultiIndex(std::move(joined));
}

MultiIndex parse_multi_index(const std::string& text) {
  auto bad = [&] { return Error(ErrorCode::ParseError, "bad multi-index '" + text + "'"); };
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  std::vector<std::uint8_t> entries;
  if (!s.empty() && s.front() == '(') {
    // Parenthesized comma list.
    if (s.size() < 2 || s.back() != ')') throw bad();
    const std::string body = s.substr(1, s.size() - 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
      const bool digit_slot = i % 2 == 0;
      const char c = body[i];
      if (digit_slot && (c == '0' || c == '1')) {
        entries.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (digit_slot || c != ',') {
        throw bad();
      }
    }
    if (!body.empty() && body.back() == ',') throw bad();
  } else {
    for (char c : s) {
      if (c != '0' && c != '1') throw bad();
      entries.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  return MultiIndex(std::move(entries));
}

MultiIndexSet::MultiIndexSet(std::vector<MultiIndex> members, SetKind kind, int order)
    : members_(std::move(members)), kind_(kind), order_(order) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool MultiIndexSet::contains(const MultiIndex& alpha) const {
  return std::binary_search(members_.begin(), members_.end(), alpha);
}

int MultiIndexSet::max_length() const noexcept {
  return members_.empty() ? -1 : members_.back().length();
}

std::string MultiIndexSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != 0) out += ", ";
    out += members_[i].to_string();
  }
  return out + "}";
}

MultiIndexSet set_difference(const MultiIndexSet& a, const MultiIndexSet& b) {
  std::vector<MultiIndex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return MultiIndexSet(std::move(out));
}

MultiIndexSet set_union(const MultiIndexSet& a, const MultiIndexSet& b) {
  std::vector<MultiIndex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return MultiIndexSet(std::move(out));
}

std::vector<MultiIndex> all_multi_indices(int max_length) {
  std::vector<MultiIndex> out;
  for (int len = 0; len <= max_length; ++len) {
    const std::uint64_t count = std::uint64_t{1} << len;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      std::vector<std::uint8_t> entries(static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) {
        entries[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((bits >> (len - 1 - i)) & 1U);
      }
      out.emplace_back(std::move(entries));
    }
  }
  return out;
}

namespace {

void check_order(int k) {
  if (k < 0 || k > kMaxTruncationOrder) {
    throw Error(ErrorCode::OrderTooLarge,
                "truncation order must lie in [0, " + std::to_string(kMaxTruncationOrder) +
                    "], got " + std::to_string(k),
                k);
  }
}

bool in_lambda(const MultiIndex& alpha, int k) { return alpha.weight() <= k; }

}  // namespace

MultiIndexSet lambda_set(int k) {
  check_order(k);
  std::vector<MultiIndex> members;
  for (auto& alpha : all_multi_indices(k)) {
    if (in_lambda(alpha, k)) members.push_back(std::move(alpha));
  }
  return MultiIndexSet(std::move(members), SetKind::Lambda, k);
}

MultiIndexSet remainder_set(int k) {
  check_order(k);
  std::vector<MultiIndex> members;
  for (auto& beta : all_multi_indices(k + 1)) {
    if (beta.empty() || in_lambda(beta, k)) continue;
    if (in_lambda(remove_first(beta), k)) members.push_back(std::move(beta));
  }
  return MultiIndexSet(std::move(members), SetKind::Remainder, k);
}

MultiIndexSet remainder_recursion_step(const MultiIndexSet& remainder_j,
                                       const MultiIndexSet& lambda_j,
                                       const MultiIndexSet& lambda_next) {
  const MultiIndexSet shell = set_difference(lambda_next, lambda_j);
  std::vector<MultiIndex> extended;
  for (const auto& alpha : shell) {
    for (int z = 0; z <= 1; ++z) extended.push_back(concat(MultiIndex{z}, alpha));
  }
  return set_union(set_difference(remainder_j, shell), MultiIndexSet(std::move(extended)));
}

}  // namespace qpf
