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

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qpf {

/// Finite word over {0, 1}. Entry 0 labels an integral against dt, entry 1
/// an integral against the observation (Stratonovich sense). The empty
/// word is valid.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<std::uint8_t> entries);

  int length() const noexcept { return static_cast<int>(entries_.size()); }
  int zeros() const noexcept;
  // l(alpha) + n(alpha)
  int weight() const noexcept { return length() + zeros(); }
  bool empty() const noexcept { return entries_.empty(); }

  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  int front() const { return entries_.front(); }
  int back() const { return entries_.back(); }
  const std::vector<std::uint8_t>& entries() const noexcept { return entries_; }

  /// "(1,0,1)"; the empty index prints as "()".
  std::string to_string() const;

  bool operator==(const MultiIndex&) const = default;
  /// Canonical order: shorter first, then lexicographic.
  std::strong_ordering operator<=>(const MultiIndex& other) const;

 private:
  std::vector<std::uint8_t> entries_;
};

/// Drop the first entry (written -alpha). Throws EmptyIndex.
MultiIndex remove_first(const MultiIndex& alpha);
/// Drop the last entry (written alpha-). Throws EmptyIndex.
MultiIndex remove_last(const MultiIndex& alpha);
MultiIndex concat(const MultiIndex& alpha, const MultiIndex& beta);

/// Parses "(0,1)", "()" or "01"-style strings. Throws ParseError.
MultiIndex parse_multi_index(const std::string& text);

enum class SetKind { Lambda, Remainder, Custom };

/// Sorted, duplicate-free collection of multi-indices.
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(std::vector<MultiIndex> members, SetKind kind = SetKind::Custom,
                int order = -1);

  SetKind kind() const noexcept { return kind_; }
  // k for Lambda(k) and Remainder(k); -1 for Custom.
  int order() const noexcept { return order_; }

  const std::vector<MultiIndex>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(const MultiIndex& alpha) const;
  int max_length() const noexcept;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  std::string to_string() const;

  /// Equality is on members only; the kind tag is informational.
  bool operator==(const MultiIndexSet& other) const { return members_ == other.members_; }

 private:
  std::vector<MultiIndex> members_;
  SetKind kind_ = SetKind::Custom;
  int order_ = -1;
};

MultiIndexSet set_difference(const MultiIndexSet& a, const MultiIndexSet& b);
MultiIndexSet set_union(const MultiIndexSet& a, const MultiIndexSet& b);

inline constexpr int kMaxTruncationOrder = 16;

/// Every word of length <= max_length, in canonical order.
std::vector<MultiIndex> all_multi_indices(int max_length);

/// Lambda_k = { alpha : l(alpha) + n(alpha) <= k }. Throws OrderTooLarge for k > 16.
MultiIndexSet lambda_set(int k);

/// R(Lambda_k) = { beta not in Lambda_k : -beta in Lambda_k }.
MultiIndexSet remainder_set(int k);

/// One step of the remainder-set recursion used in the induction on the
/// truncation order:
///   (R_j \ (Lambda_{j+1} \ Lambda_j)) U { (z)*alpha : z in {0,1}, alpha in Lambda_{j+1} \ Lambda_j }.
/// Equals remainder_set(j + 1) when fed remainder_set(j).
MultiIndexSet remainder_recursion_step(const MultiIndexSet& remainder_j,
                                       const MultiIndexSet& lambda_j,
                                       const MultiIndexSet& lambda_next);

}  // namespace qpf
