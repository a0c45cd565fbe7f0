#include "reachcorr/words.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace reachcorr {

WordDomain::WordDomain(std::size_t alphabet_size, std::size_t max_length)
    : alphabet_(alphabet_size), max_length_(max_length) {
  constexpr std::size_t kMaxWords = std::size_t{1} << 24;
  power_.push_back(1);
  offset_.push_back(0);
  for (std::size_t l = 0; l <= max_length_; ++l) {
    offset_.push_back(offset_.back() + power_.back());
    if (offset_.back() > kMaxWords) throw std::length_error("word domain too large");
    power_.push_back(power_.back() * std::max<std::size_t>(alphabet_, 1));
  }
  count_ = offset_[max_length_ + 1];
  if (alphabet_ == 0) count_ = 1;
}

std::size_t WordDomain::length(std::size_t id) const {
  if (id >= count_) throw std::out_of_range("word id out of range");
  const auto it = std::upper_bound(offset_.begin(), offset_.begin() + max_length_ + 2, id);
  return static_cast<std::size_t>(it - offset_.begin()) - 1;
}

int WordDomain::head(std::size_t id) const {
  const std::size_t l = length(id);
  if (l == 0) throw std::logic_error("head of the empty word");
  return static_cast<int>((id - offset_[l]) / power_[l - 1]);
}

std::size_t WordDomain::tail(std::size_t id) const {
  const std::size_t l = length(id);
  if (l == 0) throw std::logic_error("tail of the empty word");
  return offset_[l - 1] + (id - offset_[l]) % power_[l - 1];
}

std::vector<int> WordDomain::word(std::size_t id) const {
  std::vector<int> w;
  while (length(id) > 0) {
    w.push_back(head(id));
    id = tail(id);
  }
  return w;
}

std::size_t WordDomain::find(const std::vector<int>& w) const {
  if (w.size() > max_length_) throw std::out_of_range("word longer than the domain bound");
  std::size_t v = 0;
  for (int a : w) {
    if (a < 0 || static_cast<std::size_t>(a) >= alphabet_) throw std::out_of_range("letter outside the alphabet");
    v = v * alphabet_ + static_cast<std::size_t>(a);
  }
  return offset_[w.size()] + v;
}

LassoDomain::LassoDomain(std::vector<LassoWord> words) : words_(std::move(words)) {
  for (const auto& w : words_) {
    if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
    start_.push_back(total_);
    total_ += w.prefix.size() + w.loop.size();
  }
}

std::size_t LassoDomain::lasso_of(std::size_t pos) const {
  if (pos >= total_) throw std::out_of_range("lasso position out of range");
  const auto it = std::upper_bound(start_.begin(), start_.end(), pos);
  return static_cast<std::size_t>(it - start_.begin()) - 1;
}

int LassoDomain::letter(std::size_t pos) const {
  const auto& w = words_[lasso_of(pos)];
  const std::size_t off = offset_of(pos);
  return off < w.prefix.size() ? w.prefix[off] : w.loop[off - w.prefix.size()];
}

std::size_t LassoDomain::next(std::size_t pos) const {
  const std::size_t j = lasso_of(pos);
  const auto& w = words_[j];
  const std::size_t off = offset_of(pos) + 1;
  if (off < w.prefix.size() + w.loop.size()) return start_[j] + off;
  return start_[j] + w.prefix.size();
}

std::string word_to_string(const std::vector<int>& w, const std::vector<std::string>& alphabet) {
  const bool short_letters =
      std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& a) { return a.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!short_letters && i > 0) out += '.';
    out += alphabet.at(w[i]);
  }
  return out;
}

std::string lasso_suffix_to_string(const LassoDomain& dom, std::size_t pos,
                                   const std::vector<std::string>& labels) {
  const auto& w = dom.words()[dom.lasso_of(pos)];
  const std::size_t off = dom.offset_of(pos);
  std::vector<int> prefix;
  std::vector<int> loop;
  if (off < w.prefix.size()) {
    prefix.assign(w.prefix.begin() + static_cast<std::ptrdiff_t>(off), w.prefix.end());
    loop = w.loop;
  } else {
    const std::size_t r = off - w.prefix.size();
    loop.assign(w.loop.begin() + static_cast<std::ptrdiff_t>(r), w.loop.end());
    loop.insert(loop.end(), w.loop.begin(), w.loop.begin() + static_cast<std::ptrdiff_t>(r));
  }
  return word_to_string(prefix, labels) + "(" + word_to_string(loop, labels) + ")^w";
}

}  // namespace reachcorr
