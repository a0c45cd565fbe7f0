#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reachcorr/models.hpp"

namespace reachcorr {

/// All words over an alphabet of `alphabet_size` letters with length at most
/// `max_length`, numbered by (length, lexicographic). Closed under suffixes.
class WordDomain {
 public:
  WordDomain(std::size_t alphabet_size, std::size_t max_length);

  std::size_t size() const { return count_; }
  std::size_t alphabet_size() const { return alphabet_; }
  std::size_t max_length() const { return max_length_; }

  std::size_t length(std::size_t id) const;
  /// First letter; the word must be non-empty.
  int head(std::size_t id) const;
  /// Id of the word without its first letter.
  std::size_t tail(std::size_t id) const;
  std::vector<int> word(std::size_t id) const;
  /// Id of `w`; throws std::out_of_range if `w` is not in the domain.
  std::size_t find(const std::vector<int>& w) const;

 private:
  std::size_t alphabet_;
  std::size_t max_length_;
  std::vector<std::size_t> offset_;  // offset_[l] = id of the first word of length l
  std::vector<std::size_t> power_;   // alphabet_^l
  std::size_t count_ = 0;
};

/// Positions of a finite set of lasso words u v^omega. Position p of lasso j
/// stands for the suffix starting at letter p; the position after the last
/// loop letter wraps to the start of the loop.
class LassoDomain {
 public:
  explicit LassoDomain(std::vector<LassoWord> words);

  std::size_t size() const { return total_; }
  const std::vector<LassoWord>& words() const { return words_; }

  /// Global position index of (lasso, offset).
  std::size_t position(std::size_t lasso, std::size_t offset) const { return start_[lasso] + offset; }
  std::size_t lasso_of(std::size_t pos) const;
  std::size_t offset_of(std::size_t pos) const { return pos - start_[lasso_of(pos)]; }
  int letter(std::size_t pos) const;
  std::size_t next(std::size_t pos) const;

 private:
  std::vector<LassoWord> words_;
  std::vector<std::size_t> start_;
  std::size_t total_ = 0;
};

/// Letters concatenated, or joined with '.' when some letter is longer than one character.
std::string word_to_string(const std::vector<int>& w, const std::vector<std::string>& alphabet);
/// The suffix at `pos` written as u(v)^w.
std::string lasso_suffix_to_string(const LassoDomain& dom, std::size_t pos,
                                   const std::vector<std::string>& labels);

}  // namespace reachcorr
